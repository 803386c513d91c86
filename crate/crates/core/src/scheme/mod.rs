//! The scheme of a loose graph over F_q as a constructible subset of
//! PG(m-1, q), where m is the number of vertices of the completion.
//!
//! Every piece is a difference of coordinate subspaces, so membership of a
//! point depends only on its support. A support S is allowed when
//! `v ∈ S ⊆ N[v]` for an original vertex v (closed neighborhood in the
//! completion), or when S is the pair of fresh ends of a vertexless edge.

mod checks;
mod geometry;
mod pattern;

pub use checks::{
    convexity_check, count_points, decompose, DEFAULT_NODES, rule_checks, subgraph_span_dim, ConvexityReport,
    Decomposition, PointCount, Polynomial, RuleReport,
};
pub use geometry::{classify_lines, enumerate_subspaces, vector_subspaces, DoubleRank, MAX_SUBSPACE_DIM, IncidenceGeometry, Line, LineKind};
pub use pattern::ExtTester;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FField};
use crate::graph::{Completion, LooseGraph};
use crate::proj::{ProjPoint, ProjSpace};

/// Largest completion size accepted by [`build_scheme`].
pub const MAX_AMBIENT: usize = 12;
/// Largest number of rational points a model may hold.
pub const MAX_SCHEME_POINTS: usize = 2_000_000;

/// The allowed supports of a scheme inside an ambient coordinate set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFamily {
    size: usize,
    /// Indexed by support bitmask.
    allowed: Vec<bool>,
}

/// A graph on ambient coordinates with a marked set of "original" vertices;
/// the unmarked ones are fresh ends. This covers both completions and
/// complements.
#[derive(Clone, Debug)]
pub struct Ambient {
    pub size: usize,
    pub edges: Vec<[usize; 2]>,
    pub original: Vec<bool>,
}

impl Ambient {
    pub fn of_completion(c: &Completion) -> Self {
        Ambient {
            size: c.vertex_count(),
            edges: c
                .graph
                .edges()
                .iter()
                .map(|e| [e.slots[0].unwrap(), e.slots[1].unwrap()])
                .collect(),
            original: (0..c.vertex_count()).map(|v| c.is_original(v)).collect(),
        }
    }

    /// Closed neighborhood bitmask.
    pub fn closed_nbhd(&self, v: usize) -> u64 {
        self.edges.iter().fold(1 << v, |m, &[a, b]| {
            if a == v {
                m | 1 << b
            } else if b == v {
                m | 1 << a
            } else {
                m
            }
        })
    }
}

impl SupportFamily {
    pub fn new(amb: &Ambient) -> Result<Self> {
        if amb.size > MAX_AMBIENT {
            return Err(Error::Budget(format!(
                "ambient dimension {} exceeds {}",
                amb.size as isize - 1,
                MAX_AMBIENT - 1
            )));
        }
        let mut allowed = vec![false; 1 << amb.size];
        for v in (0..amb.size).filter(|&v| amb.original[v]) {
            let nb = amb.closed_nbhd(v);
            let rest = nb & !(1 << v);
            let mut sub = rest;
            loop {
                allowed[(sub | 1 << v) as usize] = true;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        for &[a, b] in &amb.edges {
            if !amb.original[a] && !amb.original[b] {
                allowed[(1 << a | 1 << b) as usize] = true;
            }
        }
        Ok(SupportFamily {
            size: amb.size,
            allowed,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn allows(&self, mask: u64) -> bool {
        self.allowed[mask as usize]
    }

    pub fn supports(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.allowed.len() as u64).filter(|&m| self.allowed[m as usize])
    }

    /// Number of F_q-points: each support S carries (q-1)^(|S|-1) points.
    pub fn rational_count(&self, q: u64) -> u64 {
        self.supports().map(|s| (q - 1).pow(s.count_ones() - 1)).sum()
    }
}

pub fn support_mask(v: &[Elem]) -> u64 {
    v.iter()
        .enumerate()
        .fold(0, |m, (i, &x)| if x != 0 { m | 1 << i } else { m })
}

/// Per-vertex and per-vertexless-edge pieces, in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Piece {
    /// `Π_v \ H_v` with `Π_v` spanned by `span` and `H_v` by `span` minus `v`.
    Affine { vertex: usize, span: Vec<usize> },
    /// The line through two fresh ends minus those two points.
    Torus { edge: usize, ends: [usize; 2] },
}

#[derive(Clone, Debug)]
pub struct SchemeModel {
    pub graph: LooseGraph,
    pub completion: Completion,
    pub field: FField,
    pub family: SupportFamily,
    pub ambient: Ambient,
    /// Rational points, sorted.
    pub points: Vec<ProjPoint>,
    index: HashMap<Vec<Elem>, usize>,
    /// Extension-degree bound R for constructible tests.
    pub ext_bound: usize,
}

/// Builds the scheme of `g` over `F_q` with extension bound `m`.
pub fn build_scheme(g: &LooseGraph, field: &FField) -> Result<SchemeModel> {
    let completion = g.completion();
    let amb = Ambient::of_completion(&completion);
    let bound = amb.size.max(1);
    SchemeModel::from_ambient(g.clone(), completion, amb, field, bound)
}

/// Rational points of the support family, sorted.
pub fn family_points(family: &SupportFamily, field: &FField) -> Result<Vec<ProjPoint>> {
    let total = family.rational_count(field.q() as u64);
    if total > MAX_SCHEME_POINTS as u64 {
        return Err(Error::Budget(format!("{total} rational points")));
    }
    let m = family.size();
    let mut points = Vec::with_capacity(total as usize);
    for s in family.supports() {
        let idx: Vec<usize> = (0..m).filter(|&i| s >> i & 1 == 1).collect();
        let (first, rest) = idx.split_first().expect("supports are nonempty");
        let mut digits = vec![1 as Elem; rest.len()];
        loop {
            let mut v = vec![0; m];
            v[*first] = 1;
            for (&i, &d) in rest.iter().zip(&digits) {
                v[i] = d;
            }
            points.push(ProjPoint(v));
            // next tuple over the nonzero elements
            let mut k = 0;
            while k < digits.len() && digits[k] as usize == field.q() - 1 {
                digits[k] = 1;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
            digits[k] += 1;
        }
    }
    points.sort();
    Ok(points)
}

impl SchemeModel {
    pub fn from_ambient(
        graph: LooseGraph,
        completion: Completion,
        ambient: Ambient,
        field: &FField,
        ext_bound: usize,
    ) -> Result<Self> {
        let family = SupportFamily::new(&ambient)?;
        let points = family_points(&family, field)?;
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.0.clone(), i))
            .collect();
        Ok(SchemeModel {
            graph,
            completion,
            field: field.clone(),
            family,
            ambient,
            points,
            index,
            ext_bound,
        })
    }

    /// Replaces the extension bound used by constructible tests.
    pub fn with_ext_bound(mut self, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Input("extension bound must be at least 1".into()));
        }
        self.ext_bound = r;
        Ok(self)
    }

    /// Number of homogeneous coordinates m.
    pub fn m(&self) -> usize {
        self.ambient.size
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> ProjSpace {
        ProjSpace::new(&self.field, self.m()).expect("ambient fits")
    }

    pub fn contains_vec(&self, v: &[Elem]) -> bool {
        let s = support_mask(v);
        s != 0 && self.family.allows(s)
    }

    /// Index of a normalized point in [`SchemeModel::points`].
    pub fn index_of(&self, v: &[Elem]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn tester(&self) -> ExtTester<'_> {
        ExtTester::new(&self.family, &self.field, self.ext_bound)
    }

    pub fn pieces(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        for v in 0..self.m() {
            if self.ambient.original[v] {
                let nb = self.ambient.closed_nbhd(v);
                out.push(Piece::Affine {
                    vertex: v,
                    span: (0..self.m()).filter(|&i| nb >> i & 1 == 1).collect(),
                });
            }
        }
        for (e, &[a, b]) in self.ambient.edges.iter().enumerate() {
            if !self.ambient.original[a] && !self.ambient.original[b] {
                out.push(Piece::Torus { edge: e, ends: [a, b] });
            }
        }
        out
    }

    /// Ambient coordinate names (completion vertex names).
    pub fn coordinate_names(&self) -> &[String] {
        self.completion.graph.vertices()
    }

    /// Point counts over F_{q^r} for `r = 1..=max_r`, from the support family.
    pub fn counts_by_extension(&self, max_r: usize) -> Vec<u64> {
        (1..=max_r as u32)
            .map(|r| self.family.rational_count((self.q() as u64).pow(r)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::proj::projective_points;

    /// Oracle: membership by explicit pieces on every point of PG(m-1, q).
    fn oracle_count(g: &LooseGraph, q: usize) -> usize {
        let f = FField::new(q).unwrap();
        let c = g.completion();
        let m = c.vertex_count();
        let cg = &c.graph;
        projective_points(m - 1, &f)
            .unwrap()
            .into_iter()
            .filter(|p| {
                let supp = p.support();
                let in_vertex_piece = (0..c.original_vertices).any(|v| {
                    let nb = cg.neighbors(v);
                    supp.contains(&v) && supp.iter().all(|&i| i == v || nb.contains(&i))
                });
                let in_torus = cg.edges().iter().any(|e| {
                    let [a, b] = [e.slots[0].unwrap(), e.slots[1].unwrap()];
                    !c.is_original(a) && !c.is_original(b) && supp == {
                        let mut s = vec![a, b];
                        s.sort();
                        s
                    }
                });
                in_vertex_piece || in_torus
            })
            .count()
    }

    #[test]
    fn toy_counts() {
        let f2 = FField::new(2).unwrap();
        let f3 = FField::new(3).unwrap();
        assert_eq!(build_scheme(&toy(), &f2).unwrap().len(), 7);
        assert_eq!(build_scheme(&toy(), &f3).unwrap().len(), 16);
        for q in [2, 3, 4, 5] {
            assert_eq!(oracle_count(&toy(), q), 2 * q * q - q + 1);
        }
    }

    #[test]
    fn complete_graph_is_the_plane() {
        let f2 = FField::new(2).unwrap();
        let s = build_scheme(&complete(3), &f2).unwrap();
        assert_eq!(s.points, projective_points(2, &f2).unwrap());
    }

    #[test]
    fn multiplicative_group() {
        let gm = LooseGraph::from_spec(&[], &[("g", "-", "-")]).unwrap();
        let f5 = FField::new(5).unwrap();
        assert_eq!(build_scheme(&gm, &f5).unwrap().len(), 4);
    }

    #[test]
    fn matches_oracle_on_corpus_shapes() {
        let spider = LooseGraph::from_spec(
            &["c", "a", "b"],
            &[("ca", "c", "a"), ("cb", "c", "b"), ("l1", "c", "-"), ("l2", "a", "-")],
        )
        .unwrap();
        for g in [toy(), square(), square_with_diagonal(), path(4), star(3), spider] {
            for q in [2, 3] {
                let f = FField::new(q).unwrap();
                let s = build_scheme(&g, &f).unwrap();
                assert_eq!(s.len(), oracle_count(&g, q));
                assert!(s.points.iter().all(|p| s.contains_vec(&p.0)));
            }
        }
    }

    #[test]
    fn empty_and_single_vertex() {
        let f2 = FField::new(2).unwrap();
        assert_eq!(build_scheme(&LooseGraph::empty(), &f2).unwrap().len(), 0);
        let one = LooseGraph::from_spec(&["u"], &[]).unwrap();
        assert_eq!(build_scheme(&one, &f2).unwrap().len(), 1);
    }

    #[test]
    fn ambient_budget() {
        let f2 = FField::new(2).unwrap();
        assert!(matches!(build_scheme(&path(13), &f2), Err(Error::Budget(_))));
    }
}
