//! Dense linear algebra over [`FField`]: echelon forms, ranks, null spaces,
//! and word-packed elimination over F_2.

use serde::Serialize;

use crate::field::{Elem, FField};

/// A dense matrix over a finite field, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatFq {
    pub field: FField,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl MatFq {
    pub fn zeros(field: &FField, rows: usize, cols: usize) -> Self {
        MatFq {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &FField, rows: &[Vec<Elem>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        MatFq {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(field: &FField, cols: &[Vec<Elem>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn mul(&self, other: &MatFq) -> MatFq {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = MatFq::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        mat_vec(&self.field, &self.data, self.rows, self.cols, v)
    }

    pub fn transpose(&self) -> MatFq {
        let mut out = MatFq::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        if self.field.q() == 2 {
            let packed = PackedF2::from_rows(&self.row_vecs(), self.cols);
            return packed.rank();
        }
        rank(&self.field, self.row_vecs())
    }

    /// Rows as strings of digits, e.g. `["110", "001"]`.
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl Serialize for MatFq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

pub fn mat_vec(f: &FField, data: &[Elem], rows: usize, cols: usize, v: &[Elem]) -> Vec<Elem> {
    debug_assert_eq!(v.len(), cols);
    (0..rows)
        .map(|i| {
            let row = &data[i * cols..(i + 1) * cols];
            row.iter()
                .zip(v)
                .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
        })
        .collect()
}

pub fn dot(f: &FField, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(f: &FField, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for j in 0..ncols {
                    let sub = f.mul(factor, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &FField, mut rows: Vec<Vec<Elem>>) -> usize {
    rref(f, &mut rows).len()
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows over `ncols` columns.
pub fn nullspace(f: &FField, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut work: Vec<Vec<Elem>> = rows.to_vec();
    let pivots = rref(f, &mut work);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(work[r][fc]);
            }
            v
        })
        .collect()
}

/// Scales `v` so its first nonzero entry is 1. Returns false for the zero vector.
pub fn normalize(f: &FField, v: &mut [Elem]) -> bool {
    let Some(&lead) = v.iter().find(|&&x| x != 0) else {
        return false;
    };
    if lead != 1 {
        let inv = f.inv(lead);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

/// Rows of a matrix over F_2 packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedF2 {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl PackedF2 {
    pub fn from_rows(rows: &[Vec<Elem>], ncols: usize) -> Self {
        let words = ncols.div_ceil(64).max(1);
        let rows = rows
            .iter()
            .map(|r| {
                let mut w = vec![0u64; words];
                for (j, &x) in r.iter().enumerate() {
                    if x & 1 == 1 {
                        w[j / 64] |= 1 << (j % 64);
                    }
                }
                w
            })
            .collect();
        PackedF2 { words, rows }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut r = 0;
        for c in 0..self.words * 64 {
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (r..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[w] & bit != 0 {
                    for (a, b) in row.iter_mut().zip(&pivot) {
                        *a ^= b;
                    }
                }
            }
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_rank() {
        let f = FField::new(3).unwrap();
        assert_eq!(MatFq::identity(&f, 3).rank(), 3);
    }

    #[test]
    fn single_row_over_f2() {
        let f = FField::new(2).unwrap();
        assert_eq!(MatFq::from_rows(&f, &[vec![1, 1]]).rank(), 1);
    }

    #[test]
    fn edge_into_path_matrix() {
        // K2 into the middle edge of a 3-vertex path: columns e_0, e_1 of PG(2, 2).
        let f = FField::new(2).unwrap();
        let m = MatFq::from_rows(&f, &[vec![1, 0], vec![0, 1], vec![0, 0]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_annihilates() {
        let f = FField::new(5).unwrap();
        let a = vec![vec![1, 2, 3, 4], vec![0, 1, 1, 0]];
        let ns = nullspace(&f, &a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &a {
                assert_eq!(dot(&f, r, v), 0);
            }
        }
    }

    #[test]
    fn packed_matches_generic_wide() {
        let f = FField::new(2).unwrap();
        let rows: Vec<Vec<Elem>> = (0..70)
            .map(|i| (0..130).map(|j| (((i * 7 + j * 3) % 5) % 2) as Elem).collect())
            .collect();
        assert_eq!(
            PackedF2::from_rows(&rows, 130).rank(),
            rank(&f, rows.clone())
        );
    }

    fn mat_strategy(q: usize, r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<Elem>>> {
        prop::collection::vec(prop::collection::vec(0..q as Elem, c), r)
    }

    proptest! {
        #[test]
        fn rank_of_product_is_bounded(a in mat_strategy(3, 4, 3), b in mat_strategy(3, 3, 5)) {
            let f = FField::new(3).unwrap();
            let ma = MatFq::from_rows(&f, &a);
            let mb = MatFq::from_rows(&f, &b);
            let prod = ma.mul(&mb).rank();
            prop_assert!(prod <= ma.rank().min(mb.rank()));
        }

        #[test]
        fn rank_invariant_under_permutations(a in mat_strategy(2, 5, 6), shift in 0usize..6) {
            let f = FField::new(2).unwrap();
            let m = MatFq::from_rows(&f, &a);
            let mut rows = a.clone();
            rows.reverse();
            let permuted: Vec<Vec<Elem>> = rows
                .iter()
                .map(|r| (0..6).map(|j| r[(j + shift) % 6]).collect())
                .collect();
            prop_assert_eq!(m.rank(), MatFq::from_rows(&f, &permuted).rank());
            prop_assert_eq!(m.rank(), rank(&f, a.clone()));
        }
    }
}
