//! Automorphism groups of colored incidence structures by individualization
//! and refinement.
//!
//! A [`Structure`] has colored points, colored unordered blocks (lines,
//! edges) and colored arcs (ordered pairs, e.g. covering relations). The
//! group is built level by level along a fixed path of individualized
//! points: at each level every candidate image of the path point outside
//! the orbit already known is tested by a subtree search for one
//! automorphism. The product of the resulting orbit lengths is the order.

use std::collections::HashSet;

use crate::perm::{Perm, PermGroup};

#[derive(Clone, Debug, Default)]
pub struct Structure {
    n: usize,
    colors: Vec<u64>,
    blocks: Vec<(u64, Vec<usize>)>,
    arcs: Vec<(u64, usize, usize)>,
    /// For each point, the blocks containing it.
    point_blocks: Vec<Vec<usize>>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

impl Structure {
    pub fn new(n: usize, colors: Vec<u64>) -> Self {
        assert_eq!(colors.len(), n);
        Structure {
            n,
            colors,
            blocks: Vec::new(),
            arcs: Vec::new(),
            point_blocks: vec![Vec::new(); n],
            out_arcs: vec![Vec::new(); n],
            in_arcs: vec![Vec::new(); n],
        }
    }

    pub fn add_block(&mut self, color: u64, mut points: Vec<usize>) {
        points.sort_unstable();
        let id = self.blocks.len();
        for &p in &points {
            self.point_blocks[p].push(id);
        }
        self.blocks.push((color, points));
    }

    pub fn add_arc(&mut self, color: u64, from: usize, to: usize) {
        let id = self.arcs.len();
        self.out_arcs[from].push(id);
        self.in_arcs[to].push(id);
        self.arcs.push((color, from, to));
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Exact check that `p` preserves colors, blocks and arcs.
    pub fn is_automorphism(&self, p: &Perm) -> bool {
        if (0..self.n).any(|i| self.colors[i] != self.colors[p.image(i)]) {
            return false;
        }
        let blocks: HashSet<(u64, &[usize])> =
            self.blocks.iter().map(|(c, b)| (*c, b.as_slice())).collect();
        for (c, b) in &self.blocks {
            let img = p.image_set(b);
            if !blocks.contains(&(*c, img.as_slice())) {
                return false;
            }
        }
        let arcs: HashSet<&(u64, usize, usize)> = self.arcs.iter().collect();
        self.arcs
            .iter()
            .all(|&(c, a, b)| arcs.contains(&(c, p.image(a), p.image(b))))
    }

    /// Coarsest equitable refinement of `cells` (a coloring by ranks).
    fn refine(&self, mut cells: Vec<u32>) -> Vec<u32> {
        let mut count = distinct(&cells);
        loop {
            let sigs: Vec<(u32, Vec<u64>)> = (0..self.n)
                .map(|v| (cells[v], self.signature(v, &cells)))
                .collect();
            let mut sorted: Vec<&(u32, Vec<u64>)> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            let next: Vec<u32> = sigs
                .iter()
                .map(|s| sorted.binary_search(&s).unwrap() as u32)
                .collect();
            let c = sorted.len();
            cells = next;
            if c == count {
                return cells;
            }
            count = c;
        }
    }

    fn signature(&self, v: usize, cells: &[u32]) -> Vec<u64> {
        let mut parts: Vec<Vec<u64>> = Vec::new();
        for &b in &self.point_blocks[v] {
            let (color, members) = &self.blocks[b];
            let mut others: Vec<u64> = members
                .iter()
                .filter(|&&u| u != v)
                .map(|&u| cells[u] as u64)
                .collect();
            others.sort_unstable();
            let mut part = vec![0, *color];
            part.extend(others);
            parts.push(part);
        }
        for &a in &self.out_arcs[v] {
            let (c, _, to) = self.arcs[a];
            parts.push(vec![1, c, cells[to] as u64]);
        }
        for &a in &self.in_arcs[v] {
            let (c, from, _) = self.arcs[a];
            parts.push(vec![2, c, cells[from] as u64]);
        }
        parts.sort_unstable();
        let mut out = Vec::new();
        for p in parts {
            out.push(p.len() as u64);
            out.extend(p);
        }
        out
    }

    fn initial_cells(&self) -> Vec<u32> {
        let mut sorted = self.colors.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let cells = self
            .colors
            .iter()
            .map(|c| sorted.binary_search(c).unwrap() as u32)
            .collect();
        self.refine(cells)
    }

    fn individualize(&self, cells: &[u32], v: usize) -> Vec<u32> {
        let mut next = cells.to_vec();
        next[v] = self.n as u32;
        self.refine(next)
    }
}

fn distinct(cells: &[u32]) -> usize {
    let mut v = cells.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Members of the first (lowest-colored) non-singleton cell, sorted.
fn target_cell(cells: &[u32]) -> Option<Vec<usize>> {
    let mut sizes = std::collections::BTreeMap::new();
    for &c in cells {
        *sizes.entry(c).or_insert(0usize) += 1;
    }
    let (&c, _) = sizes.iter().find(|(_, &s)| s > 1)?;
    Some((0..cells.len()).filter(|&v| cells[v] == c).collect())
}

/// Permutation sending the point of color `k` in `from` to the point of color `k` in `to`.
fn leaf_map(from: &[u32], to: &[u32]) -> Perm {
    let n = from.len();
    let mut at = vec![0; n];
    for (v, &c) in to.iter().enumerate() {
        at[c as usize] = v;
    }
    Perm::from_images((0..n).map(|v| at[from[v] as usize]).collect()).expect("discrete leaves")
}

/// Normalizes a discrete coloring to ranks `0..n`.
fn ranks(cells: &[u32]) -> Vec<u32> {
    let mut sorted = cells.to_vec();
    sorted.sort_unstable();
    cells
        .iter()
        .map(|c| sorted.binary_search(c).unwrap() as u32)
        .collect()
}

/// Searches the subtree under `cells` for a leaf whose map from `first` is an automorphism.
fn find_automorphism(st: &Structure, cells: Vec<u32>, first: &[u32]) -> Option<Perm> {
    let mut stack = vec![cells];
    while let Some(cells) = stack.pop() {
        match target_cell(&cells) {
            None => {
                let p = leaf_map(first, &ranks(&cells));
                if st.is_automorphism(&p) {
                    return Some(p);
                }
            }
            Some(cell) => {
                for &v in cell.iter().rev() {
                    stack.push(st.individualize(&cells, v));
                }
            }
        }
    }
    None
}

/// The full automorphism group of `st` as a permutation group on its points.
pub fn automorphism_group(st: &Structure) -> PermGroup {
    let n = st.n;
    // first path
    let mut path: Vec<(Vec<u32>, Vec<usize>, usize)> = Vec::new();
    let mut cells = st.initial_cells();
    while let Some(cell) = target_cell(&cells) {
        let b = cell[0];
        let next = st.individualize(&cells, b);
        path.push((cells, cell, b));
        cells = next;
    }
    let first = ranks(&cells);
    let mut group = PermGroup::trivial(n);
    for (cells, cell, b) in path.iter().rev() {
        let mut orbit = group.orbit(*b);
        for &c in cell {
            if orbit.binary_search(&c).is_ok() {
                continue;
            }
            let sub = st.individualize(cells, c);
            if distinct(&sub) != distinct(&st.individualize(cells, *b)) {
                continue;
            }
            if let Some(p) = find_automorphism(st, sub, &first) {
                let mut gens = group.generators().to_vec();
                gens.push(p);
                group = PermGroup::new(n, gens).expect("same degree");
                orbit = group.orbit(*b);
            }
        }
    }
    group
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::tests::all_perms;

    fn brute(st: &Structure) -> usize {
        all_perms(st.len())
            .into_iter()
            .filter(|p| st.is_automorphism(&Perm::from_images(p.clone()).unwrap()))
            .count()
    }

    fn cycle_graph(n: usize) -> Structure {
        let mut st = Structure::new(n, vec![0; n]);
        for i in 0..n {
            st.add_block(0, vec![i, (i + 1) % n]);
        }
        st
    }

    #[test]
    fn cycles_are_dihedral() {
        for n in 3..8 {
            let st = cycle_graph(n);
            assert_eq!(automorphism_group(&st).order_u64(), 2 * n as u64);
        }
    }

    #[test]
    fn fano_plane() {
        let mut st = Structure::new(7, vec![0; 7]);
        for i in 0..7 {
            st.add_block(0, vec![i, (i + 1) % 7, (i + 3) % 7]);
        }
        assert_eq!(automorphism_group(&st).order_u64(), 168);
    }

    #[test]
    fn petersen_graph() {
        let mut st = Structure::new(10, vec![0; 10]);
        for i in 0..5 {
            st.add_block(0, vec![i, (i + 1) % 5]);
            st.add_block(0, vec![i, i + 5]);
            st.add_block(0, vec![5 + i, 5 + (i + 2) % 5]);
        }
        assert_eq!(automorphism_group(&st).order_u64(), 120);
    }

    #[test]
    fn colors_and_arcs_restrict() {
        let mut st = cycle_graph(4);
        st.colors[0] = 1;
        assert_eq!(automorphism_group(&st).order_u64(), 2);
        let mut chain = Structure::new(3, vec![0; 3]);
        chain.add_arc(0, 0, 1);
        chain.add_arc(0, 1, 2);
        assert_eq!(automorphism_group(&chain).order_u64(), 1);
        let mut vee = Structure::new(3, vec![0; 3]);
        vee.add_arc(0, 0, 1);
        vee.add_arc(0, 0, 2);
        assert_eq!(automorphism_group(&vee).order_u64(), 2);
    }

    #[test]
    fn matches_brute_force_on_small_structures() {
        let mut st = Structure::new(6, vec![0; 6]);
        st.add_block(0, vec![0, 1, 2]);
        st.add_block(0, vec![2, 3]);
        st.add_block(1, vec![3, 4, 5]);
        st.add_block(0, vec![0, 5]);
        assert_eq!(automorphism_group(&st).order_u64() as usize, brute(&st));
        let empty = Structure::new(5, vec![0; 5]);
        assert_eq!(automorphism_group(&empty).order_u64(), 120);
        let none = Structure::new(0, vec![]);
        assert_eq!(automorphism_group(&none).order_u64(), 1);
    }
}
