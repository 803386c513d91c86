//! Matrices of loose graph morphisms: local matrices on loose stars, global
//! matrices on completions, and the rational maps they induce.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f1::{point_congruence, PointCongruence};
use crate::field::{Elem, FField};
use crate::graph::{EdgeImage, LooseMorphism};
use crate::linalg::{normalize, rank};
use crate::proj::ProjPoint;
use crate::scheme::SchemeModel;

/// A 0/1 matrix whose columns are zero or canonical, stored by the row of
/// each column's single 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphMatrix {
    pub rows: usize,
    pub col_image: Vec<Option<usize>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl MorphMatrix {
    pub fn cols(&self) -> usize {
        self.col_image.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> u8 {
        u8::from(self.col_image[c] == Some(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| (0..self.cols()).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    /// Rows as strings of 0 and 1.
    pub fn row_strings(&self) -> Vec<String> {
        self.to_rows()
            .iter()
            .map(|r| r.iter().map(|&x| char::from(b'0' + x)).collect())
            .collect()
    }

    /// `self · other`.
    pub fn mul(&self, other: &MorphMatrix) -> Result<MorphMatrix> {
        if other.rows != self.cols() {
            return Err(Error::Input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        Ok(MorphMatrix {
            rows: self.rows,
            col_image: other
                .col_image
                .iter()
                .map(|c| c.and_then(|r| self.col_image[r]))
                .collect(),
            row_labels: self.row_labels.clone(),
            col_labels: other.col_labels.clone(),
        })
    }

    /// Rank over F2.
    pub fn rank(&self) -> usize {
        rank(&FField::new(2).expect("F2"), self.to_rows())
    }

    pub fn zero_columns(&self) -> usize {
        self.col_image.iter().filter(|c| c.is_none()).count()
    }

    pub fn zero_rows(&self) -> usize {
        (0..self.rows)
            .filter(|&r| !self.col_image.contains(&Some(r)))
            .count()
    }

    /// Block widths `n_i` per row; with [`Self::zero_columns`] they sum to the column count.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut n = vec![0; self.rows];
        for r in self.col_image.iter().flatten() {
            n[*r] += 1;
        }
        n
    }

    /// Applies the 0/1 matrix to a vector over `f`.
    pub fn apply(&self, f: &FField, x: &[Elem]) -> Vec<Elem> {
        let mut y = vec![0; self.rows];
        for (c, r) in self.col_image.iter().enumerate() {
            if let Some(r) = r {
                y[*r] = f.add(y[*r], x[c]);
            }
        }
        y
    }
}

/// The matrix of `f` restricted to the loose star of source vertex `v`.
///
/// Columns are the star's edges, rows the distinct image edges. A star
/// whose image has no edges gets a single zero row.
pub fn local_matrix(f: &LooseMorphism, v: usize) -> Result<MorphMatrix> {
    if v >= f.source.vertex_count() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    let star = f.source.star(v);
    let mut images: Vec<usize> = star
        .iter()
        .filter_map(|&e| match f.emap[e] {
            EdgeImage::Edge { edge, .. } => Some(edge),
            EdgeImage::Vertex(_) => None,
        })
        .collect();
    images.sort_unstable();
    images.dedup();
    let col_image = star
        .iter()
        .map(|&e| match f.emap[e] {
            EdgeImage::Edge { edge, .. } => images.binary_search(&edge).ok(),
            EdgeImage::Vertex(_) => None,
        })
        .collect();
    let row_labels: Vec<String> = if images.is_empty() {
        vec![String::new()]
    } else {
        images.iter().map(|&e| f.target.edges()[e].name.clone()).collect()
    };
    Ok(MorphMatrix {
        rows: row_labels.len(),
        col_image,
        row_labels,
        col_labels: star.iter().map(|&e| f.source.edges()[e].name.clone()).collect(),
    })
}

/// The matrix of `f` on completion vertices, target rows by source columns.
pub fn global_matrix(f: &LooseMorphism) -> MorphMatrix {
    let (sc, tc, map) = f.completion_map();
    MorphMatrix {
        rows: tc.vertex_count(),
        col_image: map.into_iter().map(Some).collect(),
        row_labels: tc.graph.vertices().to_vec(),
        col_labels: sc.graph.vertices().to_vec(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComposeCheck {
    pub ok: bool,
    pub composite: MorphMatrix,
    pub product: MorphMatrix,
}

/// Compares the matrix of `g ∘ f` with the product of the matrices of `g` and `f`.
pub fn compose_check(f: &LooseMorphism, g: &LooseMorphism) -> Result<ComposeCheck> {
    let composite = global_matrix(&f.then(g)?);
    let product = global_matrix(g).mul(&global_matrix(f))?;
    Ok(ComposeCheck {
        ok: composite.rows == product.rows && composite.col_image == product.col_image,
        composite,
        product,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelSet {
    /// Scheme points annihilated by the global matrix, with their congruences.
    pub members: Vec<(ProjPoint, PointCongruence)>,
    /// Indices of the scheme points where the rational map is defined.
    pub domain: Vec<usize>,
}

/// Points of the F2-model of the source annihilated by `f`'s global matrix.
pub fn kernel_f1(f: &LooseMorphism, s: &SchemeModel) -> Result<KernelSet> {
    if s.q() != 2 || s.graph != f.source {
        return Err(Error::Input("kernel needs the F2-model of the source graph".into()));
    }
    let p = global_matrix(f);
    let mut members = Vec::new();
    let mut domain = Vec::new();
    for (i, x) in s.points.iter().enumerate() {
        if p.apply(&s.field, &x.0).iter().all(|&y| y == 0) {
            members.push((x.clone(), point_congruence(&x.0)?));
        } else {
            domain.push(i);
        }
    }
    Ok(KernelSet { members, domain })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Injectivity {
    InjectiveLinear,
    RationalOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub class: Injectivity,
    pub rank: usize,
    pub source_size: usize,
    /// Whether the completion vertex map is injective, found independently of the rank.
    pub vertex_map_injective: bool,
}

impl InjectivityReport {
    /// The rank test and the vertex map test agree.
    pub fn consistent(&self) -> bool {
        (self.class == Injectivity::InjectiveLinear) == self.vertex_map_injective
    }
}

pub fn injectivity_criterion(f: &LooseMorphism) -> InjectivityReport {
    let p = global_matrix(f);
    let rank = p.rank();
    let mut seen = vec![false; p.rows];
    let vertex_map_injective = p.col_image.iter().flatten().all(|&r| !std::mem::replace(&mut seen[r], true));
    InjectivityReport {
        class: if rank == p.cols() {
            Injectivity::InjectiveLinear
        } else {
            Injectivity::RationalOnly
        },
        rank,
        source_size: p.cols(),
        vertex_map_injective,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapImage {
    pub point: ProjPoint,
    /// Whether the image is a point of the target model.
    pub in_target: bool,
}

/// Image of a source point under the rational map of `f`; `None` on the kernel.
pub fn apply_morphism(f: &LooseMorphism, x: &ProjPoint, target: &SchemeModel) -> Result<Option<MapImage>> {
    if target.graph != f.target {
        return Err(Error::Input("target model does not belong to the target graph".into()));
    }
    let p = global_matrix(f);
    if x.0.len() != p.cols() {
        return Err(Error::Input(format!(
            "point has {} coordinates, expected {}",
            x.0.len(),
            p.cols()
        )));
    }
    let mut y = p.apply(&target.field, &x.0);
    if !normalize(&target.field, &mut y) {
        return Ok(None);
    }
    let in_target = target.index_of(&y).is_some();
    Ok(Some(MapImage {
        point: ProjPoint(y),
        in_target,
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct MapReport {
    pub defined: usize,
    pub undefined: usize,
    /// Images that fall outside the target model.
    pub escapes: Vec<(ProjPoint, ProjPoint)>,
}

/// Applies `f` to every point of the source model.
pub fn map_scheme(f: &LooseMorphism, source: &SchemeModel, target: &SchemeModel) -> Result<MapReport> {
    if source.graph != f.source || source.q() != target.q() {
        return Err(Error::Input("models do not match the morphism".into()));
    }
    let mut rep = MapReport {
        defined: 0,
        undefined: 0,
        escapes: Vec::new(),
    };
    for x in &source.points {
        match apply_morphism(f, x, target)? {
            None => rep.undefined += 1,
            Some(img) => {
                rep.defined += 1;
                if !img.in_target {
                    rep.escapes.push((x.clone(), img.point));
                }
            }
        }
    }
    Ok(rep)
}
