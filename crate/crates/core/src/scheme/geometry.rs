//! The scheme as an incidence geometry: projective and complete affine
//! lines, and the affine and projective subspaces behind the double rank.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{Piece, SchemeModel};
use crate::error::{Error, Result};
use crate::field::{Elem, FField};
use crate::linalg::rref;
use crate::proj::{ProjPoint, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineKind {
    Projective,
    CompleteAffine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    /// Indices into the scheme's point list, sorted.
    pub points: Vec<usize>,
    pub kind: LineKind,
    /// The rational point of the projective line outside the scheme.
    pub missing: Option<ProjPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceGeometry {
    pub points: Vec<ProjPoint>,
    pub lines: Vec<Line>,
}

impl IncidenceGeometry {
    pub fn lines_of_kind(&self, kind: LineKind) -> impl Iterator<Item = &Line> {
        self.lines.iter().filter(move |l| l.kind == kind)
    }
}

/// A contained subspace: projective when `hyperplane` is `None`, otherwise
/// the closure minus the hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceRecord {
    pub dim: usize,
    pub closure: Vec<Vec<Elem>>,
    pub hyperplane: Option<Vec<Vec<Elem>>>,
    /// Rational points, as indices into the scheme's point list.
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleRank {
    pub r: usize,
    pub s: usize,
    /// `affine[d]`: affine subspaces of dimension d whose closure is not contained.
    pub affine: Vec<Vec<SubspaceRecord>>,
    /// `projective[d]`: projective subspaces of dimension d fully contained.
    pub projective: Vec<Vec<SubspaceRecord>>,
}

impl DoubleRank {
    pub fn affine_counts(&self) -> Vec<usize> {
        self.affine.iter().map(Vec::len).collect()
    }
    pub fn projective_counts(&self) -> Vec<usize> {
        self.projective.iter().map(Vec::len).collect()
    }
}

fn echelon(f: &FField, vs: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut rows = vs.to_vec();
    rref(f, &mut rows);
    rows
}

fn point_indices(s: &SchemeModel, basis: &[Vec<Elem>]) -> Vec<usize> {
    let sub = Subspace {
        basis: basis.to_vec(),
    };
    let mut out: Vec<usize> = sub
        .points(&s.field)
        .iter()
        .filter_map(|p| s.index_of(&p.0))
        .collect();
    out.sort_unstable();
    out
}

/// Lines of PG(m-1, q) that are projective or complete affine lines of the scheme.
pub fn classify_lines(s: &SchemeModel) -> Result<IncidenceGeometry> {
    let f = &s.field;
    let tester = s.tester();
    let mut seen: HashSet<Vec<Vec<Elem>>> = HashSet::new();
    let mut lines = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let basis = echelon(f, &[s.points[i].0.clone(), s.points[j].0.clone()]);
            if !seen.insert(basis.clone()) {
                continue;
            }
            let all = Subspace { basis: basis.clone() }.points(f);
            let inside: Vec<usize> = all.iter().filter_map(|p| s.index_of(&p.0)).collect();
            let outside: Vec<&ProjPoint> = all.iter().filter(|p| s.index_of(&p.0).is_none()).collect();
            let mut sorted = inside.clone();
            sorted.sort_unstable();
            match outside.as_slice() {
                [] => {
                    if tester.subspace_contained(&basis)? {
                        lines.push(Line {
                            points: sorted,
                            kind: LineKind::Projective,
                            missing: None,
                        });
                    }
                }
                [p] => {
                    let b = &s.points[inside[0]].0;
                    if tester.affine_contained(&[p.0.clone()], b)? {
                        lines.push(Line {
                            points: sorted,
                            kind: LineKind::CompleteAffine,
                            missing: Some((*p).clone()),
                        });
                    }
                }
                _ => {}
            }
        }
    }
    lines.sort_by(|a, b| (a.kind, &a.points).cmp(&(b.kind, &b.points)));
    Ok(IncidenceGeometry {
        points: s.points.clone(),
        lines,
    })
}

/// All `k`-dimensional subspaces of F_q^t as reduced echelon bases.
pub fn vector_subspaces(f: &FField, t: usize, k: usize) -> Vec<Vec<Vec<Elem>>> {
    let mut out = Vec::new();
    let q = f.q();
    let mut pivots: Vec<usize> = (0..k).collect();
    if k > t {
        return out;
    }
    loop {
        // free positions: (row, col) with col > pivot[row], col not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let p = &pivots;
                (p[r] + 1..t).filter(move |c| !p.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0 as Elem; t]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for &(r, c) in &free {
                rows[r][c] = (code % q) as Elem;
                code /= q;
            }
            out.push(rows);
        }
        // next combination
        let Some(i) = (0..k).rev().find(|&i| pivots[i] < t - k + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..k {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out
}

fn lift(basis: &[Vec<Elem>], coords: &[usize], m: usize) -> Vec<Vec<Elem>> {
    basis
        .iter()
        .map(|row| {
            let mut v = vec![0; m];
            for (&c, &x) in coords.iter().zip(row) {
                v[c] = x;
            }
            v
        })
        .collect()
}

fn combine(f: &FField, coeffs: &[Vec<Elem>], basis: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let m = basis[0].len();
    coeffs
        .iter()
        .map(|c| {
            let mut v = vec![0; m];
            for (&a, b) in c.iter().zip(basis) {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(a, y));
                }
            }
            v
        })
        .collect()
}

pub const MAX_SUBSPACE_DIM: usize = 4;

/// Contained projective subspaces and affine subspaces with non-contained
/// closure, of dimension at most `dmax`.
///
/// Every such subspace lies in the closure of a single vertex piece: its
/// generic point has the union of all supports occurring on it, which must
/// itself be allowed. The search therefore runs piece by piece.
pub fn enumerate_subspaces(s: &SchemeModel, dmax: usize) -> Result<DoubleRank> {
    if dmax > MAX_SUBSPACE_DIM {
        return Err(Error::Budget(format!("subspace dimension {dmax} exceeds {MAX_SUBSPACE_DIM}")));
    }
    let f = &s.field;
    let m = s.m();
    let tester = s.tester();
    let mut affine: Vec<Vec<SubspaceRecord>> = vec![Vec::new(); dmax + 1];
    let mut projective: Vec<Vec<SubspaceRecord>> = vec![Vec::new(); dmax + 1];
    projective[0] = (0..s.len())
        .map(|i| SubspaceRecord {
            dim: 0,
            closure: vec![s.points[i].0.clone()],
            hyperplane: None,
            points: vec![i],
        })
        .collect();
    let mut seen_proj: HashSet<Vec<Vec<Elem>>> = HashSet::new();
    let mut seen_aff: BTreeSet<(Vec<Vec<Elem>>, Vec<Vec<Elem>>)> = BTreeSet::new();
    for piece in s.pieces() {
        let Piece::Affine { span, .. } = piece else {
            continue;
        };
        let t = span.len();
        for k in 2..=(dmax + 1).min(t) {
            for local in vector_subspaces(f, t, k) {
                let basis = echelon(f, &lift(&local, &span, m));
                if !seen_proj.insert(basis.clone()) {
                    continue;
                }
                if tester.subspace_contained(&basis)? {
                    projective[k - 1].push(SubspaceRecord {
                        dim: k - 1,
                        points: point_indices(s, &basis),
                        closure: basis,
                        hyperplane: None,
                    });
                    continue;
                }
                for hc in vector_subspaces(f, k, k - 1) {
                    let hyper = echelon(f, &combine(f, &hc, &basis));
                    let key = (basis.clone(), hyper.clone());
                    if seen_aff.contains(&key) {
                        continue;
                    }
                    let outside = basis
                        .iter()
                        .find(|b| {
                            let mut rows = hyper.clone();
                            rows.push((*b).clone());
                            crate::linalg::rank(f, rows) == k
                        })
                        .expect("a basis vector leaves the hyperplane");
                    if tester.affine_contained(&hyper, outside)? {
                        let all = point_indices(s, &basis);
                        let hpts = point_indices(s, &hyper);
                        let pts: Vec<usize> = all.into_iter().filter(|p| !hpts.contains(p)).collect();
                        affine[k - 1].push(SubspaceRecord {
                            dim: k - 1,
                            closure: basis.clone(),
                            hyperplane: Some(hyper),
                            points: pts,
                        });
                        seen_aff.insert(key);
                    }
                }
            }
        }
    }
    let r = (0..=dmax).rev().find(|&d| !affine[d].is_empty()).unwrap_or(0);
    let s_rank = (0..=dmax).rev().find(|&d| !projective[d].is_empty()).unwrap_or(0);
    Ok(DoubleRank {
        r,
        s: s_rank,
        affine,
        projective,
    })
}
