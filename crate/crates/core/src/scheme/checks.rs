//! Point counting, convexity, the complement decomposition, and the
//! construction rules checked on a built model.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{build_scheme, family_points, support_mask, Ambient, SchemeModel, SupportFamily};
use crate::error::{Error, Result};
use crate::field::FField;
use crate::graph::LooseGraph;
use crate::linalg::rank;
use crate::proj::{ProjPoint, ProjSpace, Subspace};

/// A polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial(pub Vec<BigRational>);

impl Polynomial {
    fn trimmed(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Polynomial(c)
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(x));
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Integer coefficients, when all are integers.
    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer().to_i64()).flatten())
            .collect()
    }

    /// Lagrange interpolation through `(x, y)` pairs with distinct `x`.
    pub fn interpolate(nodes: &[(i64, i64)]) -> Self {
        let mut coeffs = vec![BigRational::zero(); nodes.len()];
        for (i, &(xi, yi)) in nodes.iter().enumerate() {
            // basis polynomial prod_{j != i} (x - xj) / (xi - xj)
            let mut basis = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, &(xj, _)) in nodes.iter().enumerate() {
                if i == j {
                    continue;
                }
                let xj = BigRational::from_integer(BigInt::from(xj));
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * &xj;
                }
                basis = next;
                denom *= BigRational::from_integer(BigInt::from(xi)) - xj;
            }
            let scale = BigRational::from_integer(BigInt::from(yi)) / denom;
            for (k, b) in basis.into_iter().enumerate() {
                coeffs[k] += b * &scale;
            }
        }
        Self::trimmed(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let coef = if a.is_one() && d > 0 { String::new() } else { a.to_string() };
            match d {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "{coef}q")?,
                _ => write!(f, "{coef}q^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCount {
    pub counts: Vec<(usize, u64)>,
    pub polynomial: Polynomial,
    pub degree_bound: usize,
}

pub const DEFAULT_NODES: [usize; 4] = [2, 3, 4, 5];

/// Counts rational points at each q and interpolates N(q).
///
/// The degree bound is the maximum vertex degree, raised to 1 when the graph
/// has vertexless edges (each contributes q - 1).
pub fn count_points(g: &LooseGraph, qs: &[usize]) -> Result<PointCount> {
    let mut xs: Vec<usize> = qs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let bound = g.max_degree().max(usize::from(g.vertexless_edges() > 0));
    if xs.len() < bound + 1 {
        return Err(Error::Interpolation(format!(
            "degree bound {bound} needs {} sample fields, got {}",
            bound + 1,
            xs.len()
        )));
    }
    let mut counts = Vec::new();
    for &q in &xs {
        let f = FField::new(q)?;
        let n = build_scheme(g, &f)?.len() as u64;
        counts.push((q, n));
    }
    let nodes: Vec<(i64, i64)> = counts.iter().map(|&(q, n)| (q as i64, n as i64)).collect();
    let polynomial = Polynomial::interpolate(&nodes);
    if polynomial.degree().is_some_and(|d| d > bound) {
        return Err(Error::Interpolation(format!(
            "interpolant {polynomial} exceeds degree bound {bound}"
        )));
    }
    Ok(PointCount {
        counts,
        polynomial,
        degree_bound: bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub pairs_checked: usize,
    pub ok: bool,
    /// `(x, y, points of the line xy in the scheme)`.
    pub counterexample: Option<(ProjPoint, ProjPoint, usize)>,
}

/// Checks that secants between generic points of distinct vertex pieces of a
/// loose tree meet the scheme in exactly their two points.
pub fn convexity_check(t: &LooseGraph, field: &FField) -> Result<ConvexityReport> {
    if !t.is_loose_tree() {
        return Err(Error::Input("convexity check needs a loose tree".into()));
    }
    let s = build_scheme(t, field)?;
    let n = t.vertex_count();
    // points of A_u off every line of the loose star at u
    let generic: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let nb = s.ambient.closed_nbhd(u);
            (0..s.len())
                .filter(|&i| {
                    let m = support_mask(&s.points[i].0);
                    m >> u & 1 == 1 && m & !nb == 0 && (m & !(1 << u)).count_ones() >= 2
                })
                .collect()
        })
        .collect();
    let mut pairs = 0;
    for u in 0..n {
        for v in u + 1..n {
            for &x in &generic[u] {
                for &y in &generic[v] {
                    pairs += 1;
                    let line = crate::proj::span(&s.field, &[s.points[x].clone(), s.points[y].clone()]);
                    let hits = line
                        .points(&s.field)
                        .iter()
                        .filter(|p| s.index_of(&p.0).is_some())
                        .count();
                    if hits != 2 {
                        return Ok(ConvexityReport {
                            pairs_checked: pairs,
                            ok: false,
                            counterexample: Some((s.points[x].clone(), s.points[y].clone(), hits)),
                        });
                    }
                }
            }
        }
    }
    Ok(ConvexityReport {
        pairs_checked: pairs,
        ok: true,
        counterexample: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub scheme: usize,
    pub complement: usize,
    pub rest: usize,
    pub total: usize,
    pub disjoint: bool,
    pub rest_points: Vec<ProjPoint>,
}

/// Splits PG(m-1, q) into the scheme, the complement scheme, and the rest.
pub fn decompose(g: &LooseGraph, field: &FField) -> Result<Decomposition> {
    let s = build_scheme(g, field)?;
    let comp = g.complement_graph();
    let m = s.m();
    let mut original = vec![false; m];
    for &v in &comp.ambient_vertex {
        original[v] = true;
    }
    let amb = Ambient {
        size: m,
        edges: comp.ambient_ends.clone(),
        original,
    };
    let cfam = SupportFamily::new(&amb)?;
    let cpoints = family_points(&cfam, field)?;
    let disjoint = cpoints.iter().all(|p| s.index_of(&p.0).is_none());
    let space = ProjSpace::new(field, m)?;
    let rest_points: Vec<ProjPoint> = space
        .points()?
        .into_iter()
        .filter(|p| {
            let mask = support_mask(&p.0);
            !s.family.allows(mask) && !cfam.allows(mask)
        })
        .collect();
    Ok(Decomposition {
        scheme: s.len(),
        complement: cpoints.len(),
        rest: rest_points.len(),
        total: space.count(),
        disjoint,
        rest_points,
    })
}

/// Projective dimension of the span of the basis points of `sub`
/// (completion vertex indices).
pub fn subgraph_span_dim(g: &LooseGraph, sub: &[usize]) -> Result<isize> {
    let m = g.completion().vertex_count();
    if let Some(&bad) = sub.iter().find(|&&v| v >= m) {
        return Err(Error::Input(format!("vertex index {bad} outside the completion")));
    }
    let f2 = FField::new(2)?;
    let rows: Vec<Vec<u8>> = sub.iter().map(|&v| ProjPoint::basis(m, v).0).collect();
    Ok(rank(&f2, rows) as isize - 1)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RuleReport {
    pub loc_dim: bool,
    pub co: bool,
    pub mg: bool,
    pub cov: bool,
    pub failures: Vec<String>,
}

impl RuleReport {
    pub fn pass(&self) -> bool {
        self.loc_dim && self.co && self.mg && self.cov
    }
}

fn span_points(f: &FField, m: usize, coords: &[usize]) -> Vec<ProjPoint> {
    Subspace {
        basis: coords.iter().map(|&c| ProjPoint::basis(m, c).0).collect(),
    }
    .points(f)
}

/// Checks local dimension, closed cliques, multiplicative groups and
/// monotonicity under deletion on a built model.
pub fn rule_checks(s: &SchemeModel) -> Result<RuleReport> {
    let f = &s.field;
    let q = s.q() as u64;
    let m = s.m();
    let g = &s.graph;
    let mut rep = RuleReport {
        loc_dim: true,
        co: true,
        mg: true,
        cov: true,
        failures: Vec::new(),
    };
    // local dimension
    for v in 0..g.vertex_count() {
        let nb = s.ambient.closed_nbhd(v);
        let pi: Vec<usize> = (0..m).filter(|&i| nb >> i & 1 == 1).collect();
        let h: Vec<usize> = pi.iter().copied().filter(|&i| i != v).collect();
        let hpts = span_points(f, m, &h);
        let a: Vec<ProjPoint> = span_points(f, m, &pi)
            .into_iter()
            .filter(|p| !hpts.contains(p))
            .collect();
        let deg = g.degree(v);
        let dim = crate::proj::span(f, &a).dim();
        if a.len() as u64 != q.pow(deg as u32)
            || a.iter().any(|p| s.index_of(&p.0).is_none())
            || dim != deg as isize
        {
            rep.loc_dim = false;
            rep.failures.push(format!("local piece of `{}`", g.vertices()[v]));
        }
    }
    // cliques span closed subspaces
    let tester = s.tester();
    let n = g.vertex_count();
    if n <= 16 {
        for mask in 1u32..1 << n {
            let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let clique = vs
                .iter()
                .enumerate()
                .all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.adjacent(a, b)));
            if !clique {
                continue;
            }
            let basis: Vec<Vec<u8>> = vs.iter().map(|&v| ProjPoint::basis(m, v).0).collect();
            let rational = span_points(f, m, &vs).iter().all(|p| s.index_of(&p.0).is_some());
            if !rational || !tester.subspace_contained(&basis)? {
                rep.co = false;
                rep.failures.push(format!("clique {vs:?} not closed"));
            }
        }
    }
    // multiplicative groups
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.endpoint_count() != 0 {
            continue;
        }
        let a = s.completion.slot_vertex(e, 0);
        let b = s.completion.slot_vertex(e, 1);
        let pair = 1u64 << a | 1 << b;
        let pts: Vec<&ProjPoint> = s.points.iter().filter(|p| support_mask(&p.0) == pair).collect();
        let in_affine = pts.iter().any(|p| {
            let sm = support_mask(&p.0);
            (0..n).any(|v| sm >> v & 1 == 1 && sm & !s.ambient.closed_nbhd(v) == 0)
        });
        if pts.len() as u64 != q - 1 || in_affine {
            rep.mg = false;
            rep.failures.push(format!("torus of `{}`", edge.name));
        }
    }
    // monotonicity under deletion of an edge or a vertex
    let names: HashMap<&str, usize> = s
        .coordinate_names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut subgraphs = Vec::new();
    for e in 0..g.edges().len() {
        subgraphs.push((format!("without edge `{}`", g.edges()[e].name), delete(g, None, Some(e))?));
    }
    for v in 0..n {
        subgraphs.push((format!("without vertex `{}`", g.vertices()[v]), delete(g, Some(v), None)?));
    }
    for (label, sub) in subgraphs {
        let ss = build_scheme(&sub, f)?;
        let coords: Vec<usize> = ss.coordinate_names().iter().map(|n| names[n.as_str()]).collect();
        let embedded = ss.points.iter().all(|p| {
            let mut v = vec![0; m];
            for (i, &x) in p.0.iter().enumerate() {
                v[coords[i]] = x;
            }
            s.index_of(&v).is_some()
        });
        if !embedded || ss.len() >= s.len() {
            rep.cov = false;
            rep.failures.push(format!("subscheme {label}"));
        }
    }
    Ok(rep)
}

fn delete(g: &LooseGraph, vertex: Option<usize>, edge: Option<usize>) -> Result<LooseGraph> {
    let vertices: Vec<String> = (0..g.vertex_count())
        .filter(|&v| Some(v) != vertex)
        .map(|v| g.vertices()[v].clone())
        .collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, e)| Some(*i) != edge && !vertex.is_some_and(|v| e.is_incident(v)))
        .map(|(_, e)| (e.name.clone(), e.slots.map(|s| s.map(|v| g.vertices()[v].clone()))))
        .collect();
    LooseGraph::new(vertices, edges)
}
