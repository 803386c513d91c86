//! Permutation groups with a base and strong generating set.
//!
//! Composition is left to right: `a.then(&b)` maps `i` to `b(a(i))`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Input(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm(images.into_iter().map(|i| i as u32).collect()))
    }

    /// Transposition or cycle through `points` on `n` points.
    pub fn cycle(n: usize, points: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for (k, &a) in points.iter().enumerate() {
            p.0[a] = points[(k + 1) % points.len()] as u32;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().position(|(i, &j)| i as u32 != j)
    }

    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .then(&other.inverse())
            .then(self)
            .then(other)
    }

    pub fn commutes(&self, other: &Perm) -> bool {
        self.then(other) == other.then(self)
    }

    /// Maps a set of points; the result is sorted.
    pub fn image_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&i| self.image(i)).collect();
        out.sort_unstable();
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.image(x);
            }
            out.push(c);
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.cycles().iter().fold(BigUint::one(), |acc, c| {
            let l = BigUint::from(c.len());
            let g = gcd(&acc, &l);
            acc * l / g
        })
    }
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    orbit: Vec<usize>,
    /// `trans[b]` maps the level's base point to `b`.
    trans: HashMap<usize, Perm>,
}

/// A permutation group on `0..degree` held as a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_base(degree, generators, &[])
    }

    pub fn trivial(degree: usize) -> Self {
        Self::build(degree, Vec::new(), &[])
    }

    pub fn symmetric(degree: usize) -> Self {
        if degree < 2 {
            return Self::trivial(degree);
        }
        let all: Vec<usize> = (0..degree).collect();
        Self::build(
            degree,
            vec![Perm::cycle(degree, &[0, 1]), Perm::cycle(degree, &all)],
            &[],
        )
    }

    /// Builds the chain with `prefix` as the first base points.
    pub fn with_base(degree: usize, generators: Vec<Perm>, prefix: &[usize]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Input(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        if prefix.iter().any(|&b| b >= degree) {
            return Err(Error::Input("base point out of range".into()));
        }
        Ok(Self::build(degree, generators, prefix))
    }

    fn build(degree: usize, generators: Vec<Perm>, prefix: &[usize]) -> Self {
        let mut gens: Vec<Perm> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let mut base: Vec<usize> = prefix.to_vec();
        let mut strong = gens.clone();
        for g in &strong {
            if base.iter().all(|&b| g.image(b) == b) {
                base.push(g.first_moved().unwrap());
            }
        }
        let mut group = PermGroup {
            degree,
            generators: gens,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        group.strong = std::mem::take(&mut strong);
        group.levels = base
            .iter()
            .map(|&b| Level {
                point: b,
                orbit: Vec::new(),
                trans: HashMap::new(),
            })
            .collect();
        for l in 0..group.levels.len() {
            group.recompute_level(l);
        }
        let mut i = group.levels.len();
        while i > 0 {
            i -= 1;
            if let Some(j) = group.extend_at(i) {
                i = j + 1;
            }
        }
        group
    }

    /// Strong generators fixing the first `l` base points.
    fn level_gens(&self, l: usize) -> impl Iterator<Item = &Perm> {
        let fixed: Vec<usize> = self.levels[..l].iter().map(|lv| lv.point).collect();
        self.strong
            .iter()
            .filter(move |g| fixed.iter().all(|&b| g.image(b) == b))
    }

    fn recompute_level(&mut self, l: usize) {
        let point = self.levels[l].point;
        let gens: Vec<Perm> = self.level_gens(l).cloned().collect();
        let mut trans = HashMap::new();
        trans.insert(point, Perm::identity(self.degree));
        let mut orbit = vec![point];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for s in &gens {
                let y = s.image(x);
                if !trans.contains_key(&y) {
                    let u = trans[&x].then(s);
                    trans.insert(y, u);
                    orbit.push(y);
                }
            }
            k += 1;
        }
        self.levels[l].orbit = orbit;
        self.levels[l].trans = trans;
    }

    /// Checks the Schreier generators of level `i`; on finding a new strong
    /// generator, adds it and returns the deepest level that changed.
    fn extend_at(&mut self, i: usize) -> Option<usize> {
        let gens: Vec<Perm> = self.level_gens(i).cloned().collect();
        let orbit = self.levels[i].orbit.clone();
        for &b in &orbit {
            for s in &gens {
                let img = s.image(b);
                let h = self.levels[i].trans[&b]
                    .then(s)
                    .then(&self.levels[i].trans[&img].inverse());
                if h.is_identity() {
                    continue;
                }
                let (res, j) = self.sift_from(h, i + 1);
                if res.is_identity() {
                    continue;
                }
                if j == self.levels.len() {
                    let p = res.first_moved().unwrap();
                    self.levels.push(Level {
                        point: p,
                        orbit: Vec::new(),
                        trans: HashMap::new(),
                    });
                }
                self.strong.push(res);
                for l in i + 1..=j {
                    self.recompute_level(l);
                }
                return Some(j);
            }
        }
        None
    }

    fn sift_from(&self, mut h: Perm, start: usize) -> (Perm, usize) {
        for (j, lv) in self.levels.iter().enumerate().skip(start) {
            let b = h.image(lv.point);
            match lv.trans.get(&b) {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, j),
            }
        }
        (h, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }
    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn order_u64(&self) -> u64 {
        self.order().to_u64().unwrap_or(u64::MAX)
    }

    pub fn is_trivial(&self) -> bool {
        self.strong.is_empty()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(g.clone(), 0).0.is_identity()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// Equality as sets of permutations.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut orbit = vec![point];
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut k = 0;
        while k < orbit.len() {
            for g in &self.generators {
                let y = g.image(orbit[k]);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !seen[p] {
                let o = self.orbit(p);
                for &x in &o {
                    seen[x] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Subgroup generated by this group and `other`.
    pub fn join(&self, other: &PermGroup) -> PermGroup {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::build(self.degree, gens, &[])
    }

    pub fn generated_by(degree: usize, groups: &[&PermGroup]) -> PermGroup {
        let gens = groups.iter().flat_map(|g| g.generators.iter().cloned()).collect();
        Self::build(degree, gens, &[])
    }

    /// `{g : s^g = s for all s in points}`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let mut prefix: Vec<usize> = points.to_vec();
        prefix.sort_unstable();
        prefix.dedup();
        let chain = Self::build(self.degree, self.strong.clone(), &prefix);
        let gens: Vec<Perm> = chain
            .strong
            .iter()
            .filter(|g| prefix.iter().all(|&b| g.image(b) == b))
            .cloned()
            .collect();
        Self::build(self.degree, gens, &[])
    }

    /// `{g : S^g = S}`, found by backtracking over images of the points of `S`.
    pub fn setwise_stabilizer(&self, set: &[usize]) -> PermGroup {
        let mut prefix: Vec<usize> = set.to_vec();
        prefix.sort_unstable();
        prefix.dedup();
        let in_set = {
            let mut v = vec![false; self.degree];
            for &p in &prefix {
                v[p] = true;
            }
            v
        };
        let chain = Self::build(self.degree, self.strong.clone(), &prefix);
        let mut found = self.pointwise_stabilizer(&prefix);
        // Levels of `chain` up to the prefix length correspond to prefix points
        // (possibly with trivial orbits).
        let depth = prefix.len();
        let mut stack: Vec<(usize, Perm)> = vec![(0, Perm::identity(self.degree))];
        while let Some((l, g)) = stack.pop() {
            if l == depth {
                if !found.contains(&g) {
                    let mut gens = found.generators.clone();
                    gens.push(g);
                    found = Self::build(self.degree, gens, &[]);
                }
                continue;
            }
            let lv = &chain.levels[l];
            for &b in lv.orbit.iter().rev() {
                let h = lv.trans[&b].then(&g);
                if in_set[h.image(lv.point)] {
                    stack.push((l + 1, h));
                }
            }
        }
        found
    }

    /// Action on an invariant subset, relabeled by position in `subset`.
    pub fn induced_on(&self, subset: &[usize]) -> Result<PermGroup> {
        let pos: HashMap<usize, usize> = subset.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut images = Vec::with_capacity(subset.len());
            for &p in subset {
                let q = pos.get(&g.image(p)).ok_or_else(|| {
                    Error::Input(format!("point set is not invariant under {g}"))
                })?;
                images.push(*q);
            }
            gens.push(Perm::from_images(images)?);
        }
        Ok(Self::build(subset.len(), gens, &[]))
    }

    /// Membership of an element known only through `image`, sifted along the
    /// base. Sound when elements of the ambient universe are determined by
    /// their base images, e.g. collineations with a frame inside the base.
    pub fn contains_by_base_images(&self, image: impl Fn(usize) -> usize) -> bool {
        let mut imgs: Vec<usize> = self.levels.iter().map(|lv| image(lv.point)).collect();
        for l in 0..self.levels.len() {
            let Some(u) = self.levels[l].trans.get(&imgs[l]) else {
                return false;
            };
            let inv = u.inverse();
            for x in imgs[l..].iter_mut() {
                *x = inv.image(*x);
            }
        }
        true
    }

    /// Generators of `self` that fail to commute with some generator of `other`.
    pub fn commute_witness(&self, other: &PermGroup) -> Option<(Perm, Perm)> {
        for a in &self.generators {
            for b in &other.generators {
                if !a.commutes(b) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }

    /// Returns a pair `(g, n)` with `g^-1 n g` outside `self`, if `self` is not
    /// normalized by `group`.
    pub fn normality_witness(&self, group: &PermGroup) -> Option<(Perm, Perm)> {
        for g in &group.generators {
            for n in &self.generators {
                let c = g.inverse().then(n).then(g);
                if !self.contains(&c) {
                    return Some((g.clone(), n.clone()));
                }
            }
        }
        None
    }

    /// All elements; refuses groups larger than `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Perm>> {
        if self.order() > BigUint::from(limit) {
            return Err(Error::Budget(format!("group of order {} listed", self.order())));
        }
        let mut out = vec![Perm::identity(self.degree)];
        for lv in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lv.orbit.len());
            for g in &out {
                for b in &lv.orbit {
                    next.push(g.then(&lv.trans[b]));
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            degree: self.degree,
            order: self.order().to_string(),
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub order: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralProductReport {
    pub pairwise_commute: bool,
    /// `(i, j, a, b)` with generators `a` of `H_i` and `b` of `H_j` not commuting.
    pub witness: Option<(usize, usize, String, String)>,
    pub generates: bool,
    pub generated_order: String,
    /// `|H_i ∩ H_j|` for commuting pairs, from `|H_i||H_j| / |H_i H_j|`.
    pub overlaps: Vec<(usize, usize, String)>,
    pub pass: bool,
}

/// Checks that `parts` pairwise commute and generate `group`.
pub fn verify_central_product(group: &PermGroup, parts: &[&PermGroup]) -> CentralProductReport {
    let mut witness = None;
    let mut overlaps = Vec::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            match parts[i].commute_witness(parts[j]) {
                Some((a, b)) => {
                    if witness.is_none() {
                        witness = Some((i, j, a.to_string(), b.to_string()));
                    }
                }
                None => {
                    let prod = parts[i].join(parts[j]).order();
                    let overlap = parts[i].order() * parts[j].order() / prod;
                    overlaps.push((i, j, overlap.to_string()));
                }
            }
        }
    }
    let generated = PermGroup::generated_by(group.degree(), parts);
    let generates = generated.same_group(group);
    CentralProductReport {
        pairwise_commute: witness.is_none(),
        witness: witness.clone(),
        generates,
        generated_order: generated.order().to_string(),
        overlaps,
        pass: witness.is_none() && generates,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub normal: bool,
    pub witness: Option<(String, String)>,
    pub group_order: String,
    pub normal_order: String,
    pub outer_order: String,
    pub residual_order: String,
    pub divides: bool,
    pub pass: bool,
}

/// Checks `N ⊴ G` and splits `|G| = |N| · |outer| · residual`.
pub fn factor_order_identity(group: &PermGroup, normal: &PermGroup, outer: &PermGroup) -> FactorReport {
    let witness = if normal.is_subgroup_of(group) {
        normal
            .normality_witness(group)
            .map(|(g, n)| (g.to_string(), n.to_string()))
    } else {
        Some(("not a subgroup".to_string(), String::new()))
    };
    let denom = normal.order() * outer.order();
    let divides = (group.order() % &denom).is_zero();
    let residual = group.order() / &denom;
    FactorReport {
        normal: witness.is_none(),
        witness: witness.clone(),
        group_order: group.order().to_string(),
        normal_order: normal.order().to_string(),
        outer_order: outer.order().to_string(),
        residual_order: residual.to_string(),
        divides,
        pass: witness.is_none() && divides,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            out.push(perm.clone());
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                return out;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
    }

    fn fano_lines() -> Vec<Vec<usize>> {
        vec![
            vec![0, 1, 3],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![4, 5, 0],
            vec![5, 6, 1],
            vec![6, 0, 2],
        ]
    }

    fn preserves(lines: &[Vec<usize>], p: &[usize]) -> bool {
        let mut sorted: Vec<Vec<usize>> = lines
            .iter()
            .map(|l| {
                let mut v = l.clone();
                v.sort();
                v
            })
            .collect();
        sorted.sort();
        let mut img: Vec<Vec<usize>> = sorted
            .iter()
            .map(|l| {
                let mut v: Vec<usize> = l.iter().map(|&x| p[x]).collect();
                v.sort();
                v
            })
            .collect();
        img.sort();
        img == sorted
    }

    pub fn fano_group() -> PermGroup {
        let lines = fano_lines();
        let gens: Vec<Perm> = all_perms(7)
            .into_iter()
            .filter(|p| preserves(&lines, p))
            .map(|p| Perm::from_images(p).unwrap())
            .collect();
        PermGroup::new(7, gens).unwrap()
    }

    #[test]
    fn trivial_and_symmetric_orders() {
        let id = PermGroup::new(5, vec![Perm::identity(5)]).unwrap();
        assert_eq!(id.order_u64(), 1);
        for n in 0..7 {
            let s = PermGroup::symmetric(n);
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(s.order_u64(), fact.max(1));
        }
    }

    #[test]
    fn square_symmetries() {
        let r = Perm::from_images(vec![1, 2, 3, 0]).unwrap();
        let s = Perm::from_images(vec![0, 3, 2, 1]).unwrap();
        let g = PermGroup::new(4, vec![r, s]).unwrap();
        assert_eq!(g.order_u64(), 8);
        let cycle = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        let brute = all_perms(4).iter().filter(|p| preserves(&cycle, p)).count();
        assert_eq!(brute, 8);
        for p in all_perms(4) {
            assert_eq!(g.contains(&Perm::from_images(p.clone()).unwrap()), preserves(&cycle, &p));
        }
    }

    #[test]
    fn fano_collineations() {
        let g = fano_group();
        assert_eq!(g.order_u64(), 168);
        assert_eq!(g.setwise_stabilizer(&[0, 1, 3]).order_u64(), 24);
        assert_eq!(g.setwise_stabilizer(&(0..7).collect::<Vec<_>>()).order_u64(), 168);
        assert_eq!(g.pointwise_stabilizer(&[0, 1, 2, 6]).order_u64(), 1);
        assert_eq!(g.pointwise_stabilizer(&[]).order_u64(), 168);
    }

    #[test]
    fn stabilizers_in_symmetric_group() {
        let s4 = PermGroup::symmetric(4);
        assert_eq!(s4.setwise_stabilizer(&[1, 2]).order_u64(), 4);
        assert_eq!(s4.pointwise_stabilizer(&[1]).order_u64(), 6);
        let s6 = PermGroup::symmetric(6);
        assert_eq!(s6.setwise_stabilizer(&[0, 2, 5]).order_u64(), 36);
    }

    #[test]
    fn setwise_contains_pointwise() {
        let g = fano_group();
        for set in [vec![0], vec![0, 1], vec![0, 1, 3], vec![0, 1, 2]] {
            let pw = g.pointwise_stabilizer(&set);
            let sw = g.setwise_stabilizer(&set);
            assert!(pw.is_subgroup_of(&sw));
            assert!((g.order() % sw.order()).is_zero());
            assert!((sw.order() % pw.order()).is_zero());
        }
    }

    #[test]
    fn membership_rejects_outsiders() {
        let g = fano_group();
        let t = Perm::cycle(7, &[0, 1]);
        assert!(!g.contains(&t));
        assert!(PermGroup::symmetric(7).contains(&t));
    }

    #[test]
    fn elements_match_order() {
        let g = fano_group();
        let els = g.elements(1000).unwrap();
        assert_eq!(els.len(), 168);
        assert!(els.iter().all(|e| g.contains(e)));
        let mut d = els.clone();
        d.dedup();
        assert_eq!(d.len(), 168);
    }

    #[test]
    fn deterministic_chain() {
        let a = fano_group();
        let b = fano_group();
        assert_eq!(a.base(), b.base());
        assert_eq!(a.strong_generators(), b.strong_generators());
    }

    #[test]
    fn central_products() {
        let t = PermGroup::trivial(3);
        assert!(verify_central_product(&t, &[&t, &t]).pass);
        let s4 = PermGroup::symmetric(4);
        let a = PermGroup::new(4, vec![Perm::cycle(4, &[0, 1])]).unwrap();
        let b = PermGroup::new(4, vec![Perm::cycle(4, &[1, 2])]).unwrap();
        let r = verify_central_product(&s4, &[&a, &b]);
        assert!(!r.pairwise_commute && r.witness.is_some() && !r.pass);
        let c = PermGroup::new(4, vec![Perm::cycle(4, &[2, 3])]).unwrap();
        let k = a.join(&c);
        let r = verify_central_product(&k, &[&a, &c]);
        assert!(r.pass);
        assert_eq!(r.overlaps, vec![(0, 1, "1".to_string())]);
        assert!(verify_central_product(&s4, &[&s4]).pass);
    }

    #[test]
    fn factor_orders() {
        let s3 = PermGroup::symmetric(3);
        let r = factor_order_identity(&s3, &s3, &PermGroup::trivial(1));
        assert!(r.pass);
        assert_eq!((r.normal_order.as_str(), r.residual_order.as_str()), ("6", "1"));
        let a = PermGroup::new(3, vec![Perm::cycle(3, &[0, 1])]).unwrap();
        let r = factor_order_identity(&s3, &a, &PermGroup::trivial(1));
        assert!(!r.normal && r.witness.is_some());
        let a3 = PermGroup::new(3, vec![Perm::cycle(3, &[0, 1, 2])]).unwrap();
        assert!(factor_order_identity(&s3, &a3, &PermGroup::symmetric(2)).pass);
    }

    #[test]
    fn induced_actions() {
        let g = fano_group();
        let stab = g.setwise_stabilizer(&[0, 1, 3]);
        let ind = stab.induced_on(&[0, 1, 3]).unwrap();
        assert_eq!(ind.order_u64(), 6);
        assert!(g.induced_on(&[0, 1]).is_err());
    }

    #[test]
    fn perm_basics() {
        let p = Perm::cycle(5, &[0, 2, 4]);
        assert_eq!(p.to_string(), "(0,2,4)");
        assert_eq!(p.then(&p.inverse()), Perm::identity(5));
        assert_eq!(p.order(), BigUint::from(3u32));
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(PermGroup::new(3, vec![Perm::identity(4)]).is_err());
    }
}
