//! The F1 side: prime spectra of free commutative monoids as finite
//! topological spaces, closed points of Proj, and point congruences.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::PermGroup;
use crate::refine::{automorphism_group, Structure};

pub const MAX_SPEC_VARS: usize = 20;
pub const MAX_TOPO_POINTS: usize = 1 << 16;

/// A prime ideal of F1[X_1..X_n], given by the variables it contains (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonoidPrime {
    pub vars: Vec<usize>,
}

impl MonoidPrime {
    pub fn height(&self) -> usize {
        self.vars.len()
    }
    fn mask(&self) -> u64 {
        self.vars.iter().fold(0, |m, &v| m | (1 << (v - 1)))
    }
}

impl fmt::Display for MonoidPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self.vars.iter().map(|v| format!("X{v}")).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finite space of monoid primes; `p` specializes to `q` when `p ⊆ q`
/// (the closure of `p` consists of the primes containing it).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteSpace {
    pub points: Vec<MonoidPrime>,
}

impl FiniteSpace {
    pub fn new(points: Vec<MonoidPrime>) -> Self {
        FiniteSpace { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether `q` lies in the closure of `p`.
    pub fn specializes(&self, p: usize, q: usize) -> bool {
        let (a, b) = (self.points[p].mask(), self.points[q].mask());
        a & b == a
    }

    /// Covering pairs `(p, q)`: `p ⊊ q` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let masks: Vec<u64> = self.points.iter().map(|p| p.mask()).collect();
        let mut by_size: Vec<usize> = (0..masks.len()).collect();
        by_size.sort_by_key(|&i| (masks[i].count_ones(), i));
        let mut out = Vec::new();
        for (p, &mp) in masks.iter().enumerate() {
            let mut minimal: Vec<u64> = Vec::new();
            for &q in &by_size {
                let mq = masks[q];
                if mq == mp || mq & mp != mp {
                    continue;
                }
                if minimal.iter().all(|&r| r & mq != r) {
                    minimal.push(mq);
                    out.push((p, q));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn height_counts(&self) -> Vec<usize> {
        let max = self.points.iter().map(|p| p.height()).max().unwrap_or(0);
        let mut counts = vec![0; max + 1];
        for p in &self.points {
            counts[p.height()] += 1;
        }
        counts
    }
}

/// Spec F1[X_1..X_n]: one point per subset of the variables.
pub fn spec_points(n: usize) -> Result<FiniteSpace> {
    if n > MAX_SPEC_VARS {
        return Err(Error::Budget(format!("{n} variables exceeds {MAX_SPEC_VARS}")));
    }
    let mut points: Vec<MonoidPrime> = (0u64..1 << n)
        .map(|m| MonoidPrime {
            vars: (0..n).filter(|&i| m >> i & 1 == 1).map(|i| i + 1).collect(),
        })
        .collect();
    points.sort_by(|a, b| (a.height(), &a.vars).cmp(&(b.height(), &b.vars)));
    Ok(FiniteSpace { points })
}

/// Homeomorphisms of a finite space: permutations preserving specialization.
pub fn topo_aut_group(space: &FiniteSpace) -> Result<PermGroup> {
    if space.len() > MAX_TOPO_POINTS {
        return Err(Error::Budget(format!("{} points", space.len())));
    }
    let mut st = Structure::new(space.len(), vec![0; space.len()]);
    for (p, q) in space.covers() {
        st.add_arc(0, p, q);
    }
    Ok(automorphism_group(&st))
}

/// Number of closed points of Proj F1[X_0..X_m], via the F2-points of PG(m, 2).
pub fn proj_c_closed_point_count(m: usize) -> Result<u64> {
    if m > MAX_SPEC_VARS {
        return Err(Error::Budget(format!("dimension {m} exceeds {MAX_SPEC_VARS}")));
    }
    let closed = (1u64 << (m + 1)) - 1;
    // Every nonzero 0/1 vector is its own F2-class; distinct vectors give
    // distinct congruences.
    let mut seen = HashSet::new();
    for mask in 1u64..1 << (m + 1) {
        let x: Vec<u8> = (0..=m).map(|i| (mask >> i & 1) as u8).collect();
        seen.insert(point_congruence(&x)?.relations);
    }
    if seen.len() as u64 != closed {
        return Err(Error::Input(format!(
            "enumerated {} congruences, expected {closed}",
            seen.len()
        )));
    }
    Ok(closed)
}

/// A generator of a point congruence, with 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    /// `x_i ~ 0`
    Zero(usize),
    /// `x_i ~ x_j`
    Equal(usize, usize),
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Zero(i) => write!(f, "x{i}~0"),
            Relation::Equal(i, j) => write!(f, "x{i}~x{j}"),
        }
    }
}

/// The homogeneous maximal congruence of an F2-point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PointCongruence {
    pub coordinates: Vec<u8>,
    /// 1-based index of the first nonzero coordinate.
    pub pivot: usize,
    pub relations: Vec<Relation>,
}

pub fn point_congruence(x: &[u8]) -> Result<PointCongruence> {
    if let Some(&bad) = x.iter().find(|&&a| a > 1) {
        return Err(Error::Input(format!("coordinate {bad} is not 0 or 1")));
    }
    let pivot = x
        .iter()
        .position(|&a| a == 1)
        .ok_or_else(|| Error::Input("the zero vector is not a point".into()))?
        + 1;
    let relations = x
        .iter()
        .enumerate()
        .filter_map(|(i, &a)| match (i + 1, a) {
            (k, 0) => Some(Relation::Zero(k)),
            (k, _) if k == pivot => None,
            (k, _) => Some(Relation::Equal(k, pivot)),
        })
        .collect();
    Ok(PointCongruence {
        coordinates: x.to_vec(),
        pivot,
        relations,
    })
}
