//! Points and subspaces of PG(n, q).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FField};
use crate::linalg::{normalize, rref};

/// Largest point set [`ProjSpace::points`] will materialize.
pub const MAX_PROJ_POINTS: usize = 10_000_000;

/// A point of a projective space: a nonzero vector whose first nonzero
/// coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjPoint(pub Vec<Elem>);

impl ProjPoint {
    /// Normalizes `v`; `None` for the zero vector.
    pub fn new(field: &FField, mut v: Vec<Elem>) -> Option<Self> {
        normalize(field, &mut v).then_some(ProjPoint(v))
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        ProjPoint(v)
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// PG(n, q) with a bijection between points and `0..count` that follows
/// the lexicographic order of normalized coordinate vectors.
#[derive(Clone, Debug)]
pub struct ProjSpace {
    field: FField,
    len: usize,
    /// `offsets[i]` = number of points whose first nonzero coordinate is after i.
    offsets: Vec<usize>,
    count: usize,
}

impl ProjSpace {
    /// The projective space of vector dimension `len` (projective dimension `len - 1`).
    pub fn new(field: &FField, len: usize) -> Result<Self> {
        let q = field.q();
        let mut count: usize = 0;
        let mut offsets = vec![0; len];
        for i in (0..len).rev() {
            offsets[i] = count;
            let tail = q
                .checked_pow((len - 1 - i) as u32)
                .ok_or_else(|| Error::Budget(format!("PG({}, {q}) is too large", len as isize - 1)))?;
            count = count
                .checked_add(tail)
                .ok_or_else(|| Error::Budget(format!("PG({}, {q}) is too large", len as isize - 1)))?;
        }
        Ok(ProjSpace {
            field: field.clone(),
            len,
            offsets,
            count,
        })
    }

    pub fn field(&self) -> &FField {
        &self.field
    }
    /// Vector dimension (number of homogeneous coordinates).
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
    pub fn count(&self) -> usize {
        self.count
    }

    /// Index of a normalized vector.
    pub fn index(&self, v: &[Elem]) -> usize {
        let q = self.field.q();
        let pivot = v.iter().position(|&x| x != 0).expect("zero vector has no index");
        let tail = v[pivot + 1..].iter().fold(0usize, |acc, &x| acc * q + x as usize);
        self.offsets[pivot] + tail
    }

    /// Index of any nonzero vector (normalizing a copy first).
    pub fn index_of(&self, v: &[Elem]) -> usize {
        let mut w = v.to_vec();
        normalize(&self.field, &mut w);
        self.index(&w)
    }

    pub fn point(&self, mut idx: usize) -> ProjPoint {
        let q = self.field.q();
        let pivot = (0..self.len)
            .rev()
            .find(|&i| {
                let size = q.pow((self.len - 1 - i) as u32);
                idx >= self.offsets[i] && idx < self.offsets[i] + size
            })
            .expect("point index in range");
        idx -= self.offsets[pivot];
        let mut v = vec![0; self.len];
        v[pivot] = 1;
        for j in (pivot + 1..self.len).rev() {
            v[j] = (idx % q) as Elem;
            idx /= q;
        }
        ProjPoint(v)
    }

    /// All points in canonical (lexicographic) order.
    pub fn points(&self) -> Result<Vec<ProjPoint>> {
        if self.count > MAX_PROJ_POINTS {
            return Err(Error::Budget(format!(
                "PG({}, {}) has {} points",
                self.len as isize - 1,
                self.field.q(),
                self.count
            )));
        }
        let mut pts: Vec<ProjPoint> = (0..self.count).map(|i| self.point(i)).collect();
        pts.sort();
        Ok(pts)
    }
}

/// All points of PG(n, q) in lexicographic order of normalized vectors.
pub fn projective_points(n: usize, field: &FField) -> Result<Vec<ProjPoint>> {
    ProjSpace::new(field, n + 1)?.points()
}

/// A projective subspace given by an echelonized basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    pub basis: Vec<Vec<Elem>>,
}

impl Subspace {
    /// Projective dimension; the empty subspace has dimension -1.
    pub fn dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn contains(&self, field: &FField, v: &[Elem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(field, &mut rows).len() == self.basis.len()
    }

    /// All rational points of the subspace, sorted.
    pub fn points(&self, field: &FField) -> Vec<ProjPoint> {
        let k = self.basis.len();
        if k == 0 {
            return Vec::new();
        }
        let len = self.basis[0].len();
        let sub = ProjSpace::new(field, k).expect("subspace fits");
        let mut out: Vec<ProjPoint> = (0..sub.count())
            .map(|i| {
                let coeffs = sub.point(i);
                let mut v = vec![0; len];
                for (c, b) in coeffs.0.iter().zip(&self.basis) {
                    if *c == 0 {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = field.add(*x, field.mul(*c, y));
                    }
                }
                ProjPoint::new(field, v).expect("independent combination")
            })
            .collect();
        out.sort();
        out
    }
}

/// Span of a set of points, echelonized.
pub fn span(field: &FField, points: &[ProjPoint]) -> Subspace {
    let mut rows: Vec<Vec<Elem>> = points.iter().map(|p| p.0.clone()).collect();
    rref(field, &mut rows);
    Subspace { basis: rows }
}

/// Orbit of `x` under the entrywise Frobenius map.
pub fn frobenius_orbit(field: &FField, x: &ProjPoint) -> Vec<ProjPoint> {
    let mut orbit = vec![x.clone()];
    loop {
        let last = orbit.last().unwrap();
        let next: Vec<Elem> = last.0.iter().map(|&a| field.frobenius(a, 1)).collect();
        let next = ProjPoint::new(field, next).unwrap();
        if next == *x {
            return orbit;
        }
        orbit.push(next);
    }
}
