//! Random and exhaustive generation of loose graphs and morphisms, used by
//! the functoriality checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeImage, LooseGraph, LooseMorphism};

/// A random loose graph on `1..=max_vertices` vertices.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> LooseGraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.4) {
                edges.push([Some(a), Some(b)]);
            }
        }
        if rng.gen_bool(0.3) {
            edges.push([Some(a), None]);
        }
    }
    if rng.gen_bool(0.2) {
        edges.push([None, None]);
    }
    build(vertices, &edges)
}

fn build(vertices: Vec<String>, edges: &[[Option<usize>; 2]]) -> LooseGraph {
    let named = edges
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("e{i}"), s.map(|x| x.map(|v| vertices[v].clone()))))
        .collect();
    LooseGraph::new(vertices, named).expect("generated graphs are simple")
}

/// A random morphism out of `src`: vertices are merged into classes, edges
/// inside a class are contracted, and loose edges either land on an
/// existing edge or on a new one. A few unrelated vertices and edges may be
/// added to the target, keeping it within `max_vertices`.
pub fn random_morphism_from<R: Rng>(rng: &mut R, src: &LooseGraph, max_vertices: usize) -> LooseMorphism {
    let n = src.vertex_count();
    let mut class = vec![0; n];
    let mut classes = 0;
    for c in class.iter_mut() {
        *c = if classes > 0 && rng.gen_bool(0.3) {
            rng.gen_range(0..classes)
        } else {
            classes += 1;
            classes - 1
        };
    }
    let mut t_edges: Vec<[Option<usize>; 2]> = Vec::new();
    let mut emap = vec![EdgeImage::Vertex(0); src.edges().len()];
    let order = |e: &Edge| 2 - e.endpoint_count();
    let mut idx: Vec<usize> = (0..src.edges().len()).collect();
    idx.sort_by_key(|&i| order(&src.edges()[i]));
    for e in idx {
        let edge = &src.edges()[e];
        emap[e] = match edge.slots {
            [Some(a), Some(b)] => {
                let (ca, cb) = (class[a], class[b]);
                if ca == cb {
                    EdgeImage::Vertex(ca)
                } else {
                    let key = [Some(ca.min(cb)), Some(ca.max(cb))];
                    let pos = t_edges.iter().position(|s| *s == key).unwrap_or_else(|| {
                        t_edges.push(key);
                        t_edges.len() - 1
                    });
                    EdgeImage::Edge { edge: pos, swap: false }
                }
            }
            [Some(v), None] | [None, Some(v)] => {
                let c = Some(class[v]);
                let near: Vec<usize> = (0..t_edges.len()).filter(|&i| t_edges[i].contains(&c)).collect();
                let pos = match near.choose(rng) {
                    Some(&p) if rng.gen_bool(0.5) => p,
                    _ => {
                        t_edges.push([c, None]);
                        t_edges.len() - 1
                    }
                };
                EdgeImage::Edge { edge: pos, swap: false }
            }
            [None, None] => {
                let pos = if !t_edges.is_empty() && rng.gen_bool(0.5) {
                    rng.gen_range(0..t_edges.len())
                } else {
                    t_edges.push([None, None]);
                    t_edges.len() - 1
                };
                EdgeImage::Edge {
                    edge: pos,
                    swap: rng.gen_bool(0.5),
                }
            }
        };
    }
    let mut tn = classes;
    while tn < max_vertices && rng.gen_bool(0.3) {
        t_edges.push([Some(rng.gen_range(0..tn)), Some(tn)]);
        tn += 1;
    }
    if rng.gen_bool(0.2) {
        t_edges.push([Some(rng.gen_range(0..tn)), None]);
    }
    let target = build((0..tn).map(|i| format!("w{i}")).collect(), &t_edges);
    LooseMorphism::new(src.clone(), target, class, emap).expect("generated morphisms are valid")
}

/// A random pair `(f, g)` with `g ∘ f` defined, on graphs with at most
/// `max_vertices` vertices.
pub fn random_composable_pair<R: Rng>(rng: &mut R, max_vertices: usize) -> (LooseMorphism, LooseMorphism) {
    loop {
        let g0 = random_graph(rng, max_vertices);
        let f = random_morphism_from(rng, &g0, max_vertices);
        let g = random_morphism_from(rng, &f.target, max_vertices);
        if f.then(&g).is_ok() {
            return (f, g);
        }
    }
}

fn edge_candidates(src: &LooseGraph, tgt: &LooseGraph, vmap: &[usize], e: usize) -> Vec<EdgeImage> {
    let edge = &src.edges()[e];
    let mut out = Vec::new();
    if let [Some(a), Some(b)] = edge.slots {
        if vmap[a] == vmap[b] {
            out.push(EdgeImage::Vertex(vmap[a]));
        }
    }
    let swaps: &[bool] = if edge.endpoint_count() == 0 { &[false, true] } else { &[false] };
    for (te, t) in tgt.edges().iter().enumerate() {
        for &swap in swaps {
            let cand = EdgeImage::Edge { edge: te, swap };
            let incident = edge.endpoints().all(|v| t.is_incident(vmap[v]));
            let folds = matches!(edge.slots, [Some(a), Some(b)] if vmap[a] == vmap[b]);
            if incident && !folds {
                out.push(cand);
            }
        }
    }
    out
}

/// Every morphism `src → tgt`. Fails when there would be more than `limit`.
pub fn all_morphisms(src: &LooseGraph, tgt: &LooseGraph, limit: usize) -> Result<Vec<LooseMorphism>> {
    let (n, t) = (src.vertex_count(), tgt.vertex_count());
    if n > 0 && t == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let total = t.checked_pow(n as u32).ok_or_else(|| Error::Budget("too many vertex maps".into()))?;
    for code in 0..total {
        let vmap: Vec<usize> = (0..n).map(|i| code / t.pow(i as u32) % t).collect();
        let cands: Vec<Vec<EdgeImage>> = (0..src.edges().len())
            .map(|e| edge_candidates(src, tgt, &vmap, e))
            .collect();
        if cands.iter().any(Vec::is_empty) {
            continue;
        }
        let mut pick = vec![0; cands.len()];
        loop {
            let emap = pick.iter().zip(&cands).map(|(&i, c)| c[i]).collect();
            out.push(LooseMorphism::new(src.clone(), tgt.clone(), vmap.clone(), emap)?);
            if out.len() > limit {
                return Err(Error::Budget(format!("more than {limit} morphisms")));
            }
            // odometer step
            let mut k = 0;
            while k < pick.len() {
                pick[k] += 1;
                if pick[k] < cands[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// A fixed family of loose graphs on at most three vertices.
pub fn small_graphs() -> Vec<LooseGraph> {
    let g = |v: &[&str], e: &[(&str, &str, &str)]| LooseGraph::from_spec(v, e).expect("fixed graph");
    vec![
        g(&["a"], &[]),
        g(&["a", "b"], &[]),
        g(&["a", "b"], &[("ab", "a", "b")]),
        g(&["a"], &[("l", "a", "-")]),
        g(&[], &[("m", "-", "-")]),
        g(&["a", "b"], &[("ab", "a", "b"), ("la", "a", "-"), ("lb", "b", "-")]),
        g(&["a", "b", "c"], &[("ab", "a", "b"), ("bc", "b", "c")]),
        g(&["a", "b", "c"], &[("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a")]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_morphisms_are_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xF1F1);
        for _ in 0..200 {
            let (f, g) = random_composable_pair(&mut rng, 6);
            assert!(f.validate().ok && g.validate().ok);
            assert!(f.source.vertex_count() <= 6 && g.target.vertex_count() <= 6);
        }
    }

    #[test]
    fn morphism_counts() {
        let gs = small_graphs();
        // K2 to itself: two vertex bijections, and the two constant maps
        // with the edge contracted
        assert_eq!(all_morphisms(&gs[2], &gs[2], 100).unwrap().len(), 4);
        // point to anything: one per vertex
        assert_eq!(all_morphisms(&gs[0], &gs[7], 100).unwrap().len(), 3);
        // a vertexless edge goes to any edge in either orientation
        assert_eq!(all_morphisms(&gs[4], &gs[7], 100).unwrap().len(), 6);
        // nothing maps into the empty-vertex graph except from it
        assert!(all_morphisms(&gs[0], &gs[4], 100).unwrap().is_empty());
    }
}
