//! Roots and fundaments with ends in a projective space, and their orbits
//! under the full collineation group.

use std::collections::HashMap;

use serde::Serialize;

use super::{AmbientPoints, Collineation};
use crate::error::{Error, Result};
use crate::field::{Elem, FField};
use crate::perm::Perm;
use crate::scheme::vector_subspaces;

/// Configurations enumerated before giving up.
pub const MAX_CONFIGS: usize = 2_000_000;

/// `(Y, x, xy, y, X)`: lines `Y ∋ x` and `X ∋ y`, disjoint, both other than `xy`.
/// Point sets are sorted ambient indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root {
    pub line_y: Vec<usize>,
    pub x: usize,
    pub xy: Vec<usize>,
    pub y: usize,
    pub line_x: Vec<usize>,
}

/// `(α, A, xy, β, B)` with `α ∩ xy = {x}`, `β ∩ xy = {y}`, `α` and `β`
/// spanning the space, `A ⊂ α` avoiding `x` and `B ⊂ β` avoiding `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Fundament {
    pub alpha: Vec<usize>,
    pub a_end: Vec<usize>,
    pub xy: Vec<usize>,
    pub x: usize,
    pub y: usize,
    pub beta: Vec<usize>,
    pub b_end: Vec<usize>,
}

impl Fundament {
    fn key(&self) -> Vec<Vec<usize>> {
        vec![
            self.alpha.clone(),
            self.a_end.clone(),
            self.xy.clone(),
            vec![self.x],
            vec![self.y],
            self.beta.clone(),
            self.b_end.clone(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigOrbits {
    pub configurations: usize,
    pub orbits: usize,
    pub orbit_sizes: Vec<usize>,
}

/// Generators of `PΓL_n(q)`: elementary transvections over an F_p-basis of
/// F_q, one diagonal matrix and the Frobenius map.
pub fn pgamma_l_generators(f: &FField, n: usize) -> Vec<Collineation> {
    let id = |n: usize| -> Vec<Vec<Elem>> {
        (0..n).map(|i| (0..n).map(|j| Elem::from(i == j)).collect()).collect()
    };
    let w = f.primitive();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..f.degree() {
                let mut m = id(n);
                m[i][j] = f.pow(w, k);
                out.push(Collineation { matrix: m, frobenius: 0 });
            }
        }
    }
    if f.q() > 2 && n > 0 {
        let mut m = id(n);
        m[0][0] = w;
        out.push(Collineation { matrix: m, frobenius: 0 });
    }
    if f.degree() > 1 {
        out.push(Collineation {
            matrix: id(n),
            frobenius: 1,
        });
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn orbits(keys: &[Vec<Vec<usize>>], gens: &[Perm]) -> Result<ConfigOrbits> {
    let index: HashMap<&Vec<Vec<usize>>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut parent: Vec<usize> = (0..keys.len()).collect();
    for (i, k) in keys.iter().enumerate() {
        for g in gens {
            let img: Vec<Vec<usize>> = k
                .iter()
                .map(|part| {
                    let mut p = g.image_set(part);
                    p.sort_unstable();
                    p
                })
                .collect();
            let j = *index
                .get(&img)
                .ok_or_else(|| Error::Input("configuration set is not closed under collineations".into()))?;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..keys.len() {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut orbit_sizes: Vec<usize> = sizes.into_values().collect();
    orbit_sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(ConfigOrbits {
        configurations: keys.len(),
        orbits: orbit_sizes.len(),
        orbit_sizes,
    })
}

/// Point sets of all subspaces of vector dimension `k`.
fn subspaces(amb: &AmbientPoints, k: usize) -> Vec<Vec<usize>> {
    let f = amb.space.field();
    vector_subspaces(f, amb.space.len(), k)
        .into_iter()
        .map(|b| if b.is_empty() { Vec::new() } else { amb.span_indices(&b) })
        .collect()
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_err())
}

/// All fundaments with ends of type `(a, b; c, d)` in `PG(a + b - 1, q)`,
/// where `c` and `d` are the vector dimensions of the ends, with their
/// orbits under `PΓL_{a+b}(q)`.
pub fn enumerate_fundaments(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    field: &FField,
) -> Result<(Vec<Fundament>, ConfigOrbits)> {
    if a < 2 || b < 2 {
        return Err(Error::Input(format!("fundaments need a, b >= 2, got ({a}, {b})")));
    }
    if c >= a || d >= b {
        return Err(Error::Input(format!(
            "ends of dimension ({c}, {d}) do not fit in type ({a}, {b})"
        )));
    }
    let amb = AmbientPoints::new(field, a + b)?;
    let lines = subspaces(&amb, 2);
    let alphas = subspaces(&amb, a);
    let betas = if b == a { alphas.clone() } else { subspaces(&amb, b) };
    let ends_a = subspaces(&amb, c);
    let ends_b = if d == c { ends_a.clone() } else { subspaces(&amb, d) };
    let mut out = Vec::new();
    for l in &lines {
        for &x in l {
            for &y in l.iter().filter(|&&y| y != x) {
                for al in alphas.iter().filter(|s| s.binary_search(&x).is_ok() && s.binary_search(&y).is_err()) {
                    for be in betas
                        .iter()
                        .filter(|s| s.binary_search(&y).is_ok() && disjoint(s, al))
                    {
                        for ea in ends_a.iter().filter(|e| subset(e, al) && e.binary_search(&x).is_err()) {
                            for eb in ends_b.iter().filter(|e| subset(e, be) && e.binary_search(&y).is_err()) {
                                out.push(Fundament {
                                    alpha: al.clone(),
                                    a_end: ea.clone(),
                                    xy: l.clone(),
                                    x,
                                    y,
                                    beta: be.clone(),
                                    b_end: eb.clone(),
                                });
                                if out.len() > MAX_CONFIGS {
                                    return Err(Error::Budget(format!("more than {MAX_CONFIGS} fundaments")));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let gens: Vec<Perm> = pgamma_l_generators(field, a + b).iter().map(|g| amb.perm(g)).collect();
    let keys: Vec<Vec<Vec<usize>>> = out.iter().map(Fundament::key).collect();
    let orb = orbits(&keys, &gens)?;
    Ok((out, orb))
}

/// All roots of `PG(3, q)` with their orbits under `PΓL_4(q)`.
pub fn enumerate_roots(field: &FField) -> Result<(Vec<Root>, ConfigOrbits)> {
    let (fs, orb) = enumerate_fundaments(2, 2, 0, 0, field)?;
    let roots = fs
        .into_iter()
        .map(|f| Root {
            line_y: f.alpha,
            x: f.x,
            xy: f.xy,
            y: f.y,
            line_x: f.beta,
        })
        .collect();
    Ok((roots, orb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::PermGroup;

    #[test]
    fn generators_give_the_full_group() {
        let f = FField::new(2).unwrap();
        let amb = AmbientPoints::new(&f, 3).unwrap();
        let gens = pgamma_l_generators(&f, 3).iter().map(|g| amb.perm(g)).collect();
        assert_eq!(PermGroup::new(amb.len(), gens).unwrap().order_u64(), 168);
        let f = FField::new(4).unwrap();
        let amb = AmbientPoints::new(&f, 2).unwrap();
        let gens = pgamma_l_generators(&f, 2).iter().map(|g| amb.perm(g)).collect();
        assert_eq!(PermGroup::new(amb.len(), gens).unwrap().order_u64(), 120);
    }

    #[test]
    fn roots_form_one_orbit() {
        let (roots, orb) = enumerate_roots(&FField::new(2).unwrap()).unwrap();
        // 15 * 14 ordered pairs, 6 choices of Y, 4 of X
        assert_eq!(roots.len(), 5040);
        assert_eq!(orb.orbits, 1);
    }

    #[test]
    fn fundaments_with_ends() {
        let f = FField::new(2).unwrap();
        let (fs, orb) = enumerate_fundaments(2, 2, 1, 1, &f).unwrap();
        assert_eq!(fs.len(), 5040 * 4);
        assert_eq!(orb.orbits, 1);
        assert!(enumerate_fundaments(1, 3, 0, 0, &f).is_err());
        assert!(enumerate_fundaments(2, 2, 2, 0, &f).is_err());
    }
}
