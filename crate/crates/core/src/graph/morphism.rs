use serde::Serialize;

use super::{Completion, LooseGraph};
use crate::error::{Error, Result};

/// Image of a source edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeImage {
    /// Maps onto a target edge. `swap` sends slot `s` to slot `1 - s`; it is
    /// only consulted for vertexless edges, where the endpoints cannot fix
    /// the slot correspondence.
    Edge { edge: usize, swap: bool },
    /// Contracted onto a target vertex.
    Vertex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LooseMorphism {
    pub source: LooseGraph,
    pub target: LooseGraph,
    pub vmap: Vec<usize>,
    pub emap: Vec<EdgeImage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Name of the offending source edge or vertex.
    pub item: String,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub surjective: bool,
}

impl LooseMorphism {
    pub fn new(
        source: LooseGraph,
        target: LooseGraph,
        vmap: Vec<usize>,
        emap: Vec<EdgeImage>,
    ) -> Result<Self> {
        let f = LooseMorphism {
            source,
            target,
            vmap,
            emap,
        };
        let report = f.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidMorphism(format!("{}: {}", v.item, v.rule)));
        }
        Ok(f)
    }

    pub fn identity(g: &LooseGraph) -> Self {
        LooseMorphism {
            source: g.clone(),
            target: g.clone(),
            vmap: (0..g.vertex_count()).collect(),
            emap: (0..g.edges().len())
                .map(|e| EdgeImage::Edge { edge: e, swap: false })
                .collect(),
        }
    }

    /// Builds a morphism from names: `vmap` pairs and `emap` entries where an
    /// image starting with `@` names a contraction vertex.
    pub fn from_names(
        source: &LooseGraph,
        target: &LooseGraph,
        vmap: &[(&str, &str)],
        emap: &[(&str, &str)],
    ) -> Result<Self> {
        let mut vm = vec![None; source.vertex_count()];
        for (a, b) in vmap {
            vm[source.vertex_index(a)?] = Some(target.vertex_index(b)?);
        }
        let mut em = vec![None; source.edges().len()];
        for (a, b) in emap {
            let (name, swap) = match b.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (*b, false),
            };
            let img = match name.strip_prefix('@') {
                Some(v) => EdgeImage::Vertex(target.vertex_index(v)?),
                None => EdgeImage::Edge {
                    edge: target.edge_index(name)?,
                    swap,
                },
            };
            em[source.edge_index(a)?] = Some(img);
        }
        let vmap = vm
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                x.ok_or_else(|| {
                    Error::InvalidMorphism(format!("vertex `{}` has no image", source.vertices()[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let emap = em
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                x.ok_or_else(|| {
                    Error::InvalidMorphism(format!("edge `{}` has no image", source.edges()[i].name))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source.clone(), target.clone(), vmap, emap)
    }

    /// Checks incidence preservation and the contraction rule.
    pub fn validate(&self) -> MorphismReport {
        let (s, t) = (&self.source, &self.target);
        let mut violations = Vec::new();
        let mut bad = |item: &str, rule: String| {
            violations.push(Violation {
                item: item.to_string(),
                rule,
            })
        };
        if self.vmap.len() != s.vertex_count() || self.emap.len() != s.edges().len() {
            bad("morphism", "maps must be total on the source".into());
            return MorphismReport {
                ok: false,
                violations,
                surjective: false,
            };
        }
        for (v, &w) in self.vmap.iter().enumerate() {
            if w >= t.vertex_count() {
                bad(&s.vertices()[v], "image vertex out of range".into());
            }
        }
        for (ei, e) in s.edges().iter().enumerate() {
            match self.emap[ei] {
                EdgeImage::Vertex(w) => {
                    if w >= t.vertex_count() {
                        bad(&e.name, "contraction vertex out of range".into());
                    } else if e.endpoint_count() != 2 {
                        bad(
                            &e.name,
                            "only edges with two endpoints may be contracted".into(),
                        );
                    } else if e.endpoints().any(|v| self.vmap.get(v) != Some(&w)) {
                        bad(
                            &e.name,
                            "endpoints of a contracted edge must map to the contraction vertex"
                                .into(),
                        );
                    }
                }
                EdgeImage::Edge { edge, .. } => {
                    let Some(te) = t.edges().get(edge) else {
                        bad(&e.name, "image edge out of range".into());
                        continue;
                    };
                    for v in e.endpoints() {
                        if self.vmap.get(v).is_some_and(|&w| !te.is_incident(w)) {
                            bad(
                                &e.name,
                                format!(
                                    "endpoint `{}` must map to an endpoint of `{}`",
                                    s.vertices()[v],
                                    te.name
                                ),
                            );
                        }
                    }
                    if let [Some(a), Some(b)] = e.slots {
                        if self.vmap.get(a) == self.vmap.get(b) {
                            bad(
                                &e.name,
                                format!("both endpoints fold onto one end of `{}`", te.name),
                            );
                        }
                    }
                }
            }
        }
        let ok = violations.is_empty();
        let surjective = ok && {
            let mut hit_v = vec![false; t.vertex_count()];
            let mut hit_e = vec![false; t.edges().len()];
            for &w in &self.vmap {
                hit_v[w] = true;
            }
            for img in &self.emap {
                match *img {
                    EdgeImage::Vertex(w) => hit_v[w] = true,
                    EdgeImage::Edge { edge, .. } => hit_e[edge] = true,
                }
            }
            hit_v.into_iter().all(|x| x) && hit_e.into_iter().all(|x| x)
        };
        MorphismReport {
            ok,
            violations,
            surjective,
        }
    }

    /// Target slot of each slot of source edge `e`, when `e` maps to an edge.
    pub fn slot_map(&self, e: usize) -> Option<[usize; 2]> {
        let EdgeImage::Edge { edge, swap } = self.emap[e] else {
            return None;
        };
        let se = &self.source.edges()[e];
        let te = &self.target.edges()[edge];
        for s in 0..2 {
            if let Some(v) = se.slots[s] {
                let w = Some(self.vmap[v]);
                let t = if te.slots[0] == w { 0 } else { 1 };
                return Some(if s == 0 { [t, 1 - t] } else { [1 - t, t] });
            }
        }
        Some(if swap { [1, 0] } else { [0, 1] })
    }

    /// The induced map on completion vertices, source completion to target completion.
    pub fn completion_map(&self) -> (Completion, Completion, Vec<usize>) {
        let sc = self.source.completion();
        let tc = self.target.completion();
        let mut map = vec![0; sc.vertex_count()];
        for (v, m) in map.iter_mut().enumerate().take(sc.original_vertices) {
            *m = self.vmap[v];
        }
        for (&(e, s), &u) in &sc.end_vertex_of {
            let sm = self.slot_map(e).expect("free-ended edges are never contracted");
            let EdgeImage::Edge { edge, .. } = self.emap[e] else {
                unreachable!()
            };
            map[u] = tc.slot_vertex(edge, sm[s]);
        }
        (sc, tc, map)
    }

    pub fn is_vertex_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.vertex_count()];
        for &w in &self.vmap {
            hit[w] = true;
        }
        hit.into_iter().all(|x| x)
    }

    /// `other ∘ self`. Fails when `other` contracts the image of an edge
    /// with free ends, which no loose morphism can express.
    pub fn then(&self, other: &LooseMorphism) -> Result<LooseMorphism> {
        if self.target != other.source {
            return Err(Error::InvalidMorphism(
                "target of the first map is not the source of the second".into(),
            ));
        }
        let vmap: Vec<usize> = self.vmap.iter().map(|&w| other.vmap[w]).collect();
        let mut emap = Vec::with_capacity(self.emap.len());
        for (e, img) in self.emap.iter().enumerate() {
            emap.push(match *img {
                EdgeImage::Vertex(w) => EdgeImage::Vertex(other.vmap[w]),
                EdgeImage::Edge { edge, .. } => match other.emap[edge] {
                    EdgeImage::Vertex(w) => {
                        if self.source.edges()[e].endpoint_count() != 2 {
                            return Err(Error::InvalidMorphism(format!(
                                "composite would contract `{}`, which has a free end",
                                self.source.edges()[e].name
                            )));
                        }
                        EdgeImage::Vertex(w)
                    }
                    EdgeImage::Edge { edge: e2, .. } => {
                        let a = self.slot_map(e).unwrap();
                        let b = other.slot_map(edge).unwrap();
                        EdgeImage::Edge {
                            edge: e2,
                            swap: b[a[0]] == 1,
                        }
                    }
                },
            });
        }
        LooseMorphism::new(self.source.clone(), other.target.clone(), vmap, emap)
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn k2() -> LooseGraph {
        complete(2)
    }
    fn point() -> LooseGraph {
        LooseGraph::from_spec(&["p"], &[]).unwrap()
    }

    #[test]
    fn identity_is_valid() {
        for g in [toy(), square(), path(4)] {
            let r = LooseMorphism::identity(&g).validate();
            assert!(r.ok && r.surjective);
        }
    }

    #[test]
    fn contraction_of_k2() {
        let f = LooseMorphism::from_names(
            &k2(),
            &point(),
            &[("k0", "p"), ("k1", "p")],
            &[("k0k1", "@p")],
        )
        .unwrap();
        let r = f.validate();
        assert!(r.ok && r.surjective);
    }

    #[test]
    fn contracting_a_loose_edge_is_rejected() {
        let src = LooseGraph::from_spec(&["a"], &[("l", "a", "-")]).unwrap();
        let f = LooseMorphism {
            source: src,
            target: point(),
            vmap: vec![0],
            emap: vec![EdgeImage::Vertex(0)],
        };
        let r = f.validate();
        assert!(!r.ok);
        assert_eq!(r.violations[0].item, "l");
        assert!(r.violations[0].rule.contains("two endpoints"));
    }

    #[test]
    fn incidence_must_be_preserved() {
        let f = LooseMorphism {
            source: k2(),
            target: path(3),
            vmap: vec![0, 2],
            emap: vec![EdgeImage::Edge { edge: 0, swap: false }],
        };
        assert!(!f.validate().ok);
    }

    #[test]
    fn completion_map_follows_edges() {
        // toy involution swapping x and y
        let t = toy();
        let f = LooseMorphism::from_names(
            &t,
            &t,
            &[("x", "y"), ("y", "x")],
            &[("L", "L"), ("Lx", "Ly"), ("Ly", "Lx")],
        )
        .unwrap();
        let (_, _, map) = f.completion_map();
        assert_eq!(map, vec![1, 0, 3, 2]);
    }

    #[test]
    fn vertexless_edges_use_the_swap_flag() {
        let gm = LooseGraph::from_spec(&[], &[("g", "-", "-")]).unwrap();
        let f = LooseMorphism::from_names(&gm, &gm, &[], &[("g", "g'")]).unwrap();
        let (_, _, map) = f.completion_map();
        assert_eq!(map, vec![1, 0]);
        let ff = f.then(&f).unwrap();
        assert_eq!(ff.completion_map().2, vec![0, 1]);
    }

    #[test]
    fn composition() {
        let c = LooseMorphism::from_names(&k2(), &point(), &[("k0", "p"), ("k1", "p")], &[("k0k1", "@p")])
            .unwrap();
        let id = LooseMorphism::identity(&k2());
        let comp = id.then(&c).unwrap();
        assert_eq!(comp.emap, vec![EdgeImage::Vertex(0)]);
        assert!(c.then(&id).is_err());
    }
}
