//! Loose graphs: graphs whose edges carry two, one, or no endpoints.

mod format;
mod morphism;

pub use format::{emit_graph, emit_morphism, parse_graph, parse_morphism, read_graph, read_morphism};
pub use morphism::{EdgeImage, LooseMorphism, MorphismReport, Violation};

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::PermGroup;
use crate::refine::{automorphism_group, Structure};

/// An edge with up to two endpoints. `slots[i] == None` marks a free end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub name: String,
    pub slots: [Option<usize>; 2],
}

impl Edge {
    pub fn endpoints(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots.iter().flatten().copied()
    }
    pub fn endpoint_count(&self) -> usize {
        self.slots.iter().flatten().count()
    }
    pub fn free_ends(&self) -> usize {
        2 - self.endpoint_count()
    }
    pub fn is_incident(&self, v: usize) -> bool {
        self.slots.contains(&Some(v))
    }
    /// The endpoint opposite `v`, if any.
    pub fn other(&self, v: usize) -> Option<usize> {
        match self.slots {
            [Some(a), b] if a == v => b,
            [a, Some(b)] if b == v => a,
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LooseGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

/// Per-vertex decoration: edges to boundary vertices, free-ended edges, and
/// edges to other inner vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Decoration {
    pub e: usize,
    pub l: usize,
    pub i: usize,
}

/// Which vertex permutations count as graph automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphAutKind {
    /// Preserve adjacency and the (e, l, i) decoration of every vertex.
    Decorated,
    /// Preserve adjacency between vertices only; loose edges are ignored.
    Underlying,
}

impl LooseGraph {
    pub fn empty() -> Self {
        LooseGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Builds a graph from vertex names and `(edge name, [end; 2])` with
    /// `None` marking a free end.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, [Option<String>; 2])>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Duplicate(v.clone()));
            }
        }
        let mut names = BTreeSet::new();
        let mut pairs: HashMap<(usize, usize), String> = HashMap::new();
        let mut out = Vec::with_capacity(edges.len());
        for (name, ends) in edges {
            if !names.insert(name.clone()) || index.contains_key(&name) {
                return Err(Error::Duplicate(name));
            }
            let mut slots = [None, None];
            for (s, end) in ends.iter().enumerate() {
                if let Some(v) = end {
                    slots[s] = Some(*index.get(v).ok_or_else(|| Error::UnknownVertex(v.clone()))?);
                }
            }
            if let [Some(a), Some(b)] = slots {
                if a == b {
                    return Err(Error::Loop(name));
                }
                let key = (a.min(b), a.max(b));
                if let Some(prev) = pairs.insert(key, name.clone()) {
                    return Err(Error::ParallelEdges(prev, name));
                }
            }
            out.push(Edge { name, slots });
        }
        Ok(LooseGraph {
            vertices,
            edges: out,
        })
    }

    /// Convenience constructor from string slices; `"-"` marks a free end.
    pub fn from_spec(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let end = |s: &str| (s != "-").then(|| s.to_string());
        LooseGraph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(n, a, b)| (n.to_string(), [end(a), end(b)]))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }
    pub fn edge_index(&self, name: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    /// Number of edge-ends at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.is_incident(v)).count()
    }

    pub fn degree_of(&self, name: &str) -> Result<usize> {
        Ok(self.degree(self.vertex_index(name)?))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges incident with `v`, in edge order.
    pub fn star(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_incident(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges.iter().filter_map(|e| e.other(v)).collect();
        out.sort_unstable();
        out
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|e| e.is_incident(u) && e.other(u) == Some(v))
    }

    pub fn completion(&self) -> Completion {
        let mut vertices = self.vertices.clone();
        let mut end_vertex_of = HashMap::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (ei, e) in self.edges.iter().enumerate() {
            let mut slots = e.slots;
            for (s, slot) in slots.iter_mut().enumerate() {
                if slot.is_none() {
                    let id = vertices.len();
                    vertices.push(format!("{}#{}", e.name, s));
                    end_vertex_of.insert((ei, s), id);
                    *slot = Some(id);
                }
            }
            edges.push(Edge {
                name: e.name.clone(),
                slots,
            });
        }
        Completion {
            graph: LooseGraph { vertices, edges },
            original_vertices: self.vertex_count(),
            end_vertex_of,
        }
    }

    /// Vertices of degree at least two (their completion degree).
    pub fn inner_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.degree(v) >= 2).collect()
    }

    /// Vertices of degree exactly one.
    pub fn boundary(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.degree(v) == 1).collect()
    }

    /// The subgraph induced on `keep`, with only 2-endpoint edges between kept vertices.
    pub fn induced_subgraph(&self, keep: &[usize]) -> LooseGraph {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| match e.slots {
                [Some(a), Some(b)] if pos.contains_key(&a) && pos.contains_key(&b) => Some(Edge {
                    name: e.name.clone(),
                    slots: [Some(pos[&a]), Some(pos[&b])],
                }),
                _ => None,
            })
            .collect();
        LooseGraph {
            vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges,
        }
    }

    pub fn induced_inner_subgraph(&self) -> LooseGraph {
        self.induced_subgraph(&self.inner_vertices())
    }

    /// Complement inside the ambient projective F1-space of the completion.
    pub fn complement_graph(&self) -> ComplementGraph {
        let comp = self.completion();
        let cg = &comp.graph;
        let n = cg.vertex_count();
        let original = self.vertex_count();
        let mut keep_vertex = vec![false; n];
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !cg.adjacent(a, b) {
                    pairs.push([a, b]);
                    for v in [a, b] {
                        if v >= original {
                            keep_vertex[v] = true;
                        }
                    }
                }
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&v| keep_vertex[v]).collect();
        let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = pairs
            .iter()
            .map(|&[a, b]| Edge {
                name: format!("{}~{}", cg.vertices[a], cg.vertices[b]),
                slots: [pos.get(&a).copied(), pos.get(&b).copied()],
            })
            .collect();
        ComplementGraph {
            graph: LooseGraph {
                vertices: kept.iter().map(|&v| cg.vertices[v].clone()).collect(),
                edges,
            },
            ambient_ends: pairs,
            ambient_vertex: kept,
        }
    }

    pub fn decoration(&self, v: usize) -> Decoration {
        let mut d = Decoration { e: 0, l: 0, i: 0 };
        for e in self.edges.iter().filter(|e| e.is_incident(v)) {
            match e.other(v) {
                None => d.l += 1,
                Some(u) if self.degree(u) == 1 => d.e += 1,
                Some(_) => d.i += 1,
            }
        }
        d
    }

    /// Number of vertexless edges.
    pub fn vertexless_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.endpoint_count() == 0).count()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Connected, acyclic, and without vertexless edges.
    pub fn is_loose_tree(&self) -> bool {
        let n = self.vertex_count();
        let inner_edges = self.edges.iter().filter(|e| e.endpoint_count() == 2).count();
        n > 0 && self.vertexless_edges() == 0 && self.is_connected() && inner_edges + 1 == n
    }

    /// Graph distance between vertices (number of 2-endpoint edges), if connected.
    pub fn distance(&self, a: usize, b: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[a] = 0;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        (dist[b] != usize::MAX).then_some(dist[b])
    }

    /// Vertex permutations preserving adjacency (and decorations for [`GraphAutKind::Decorated`]).
    pub fn aut_group(&self, kind: GraphAutKind) -> PermGroup {
        let n = self.vertex_count();
        let colors: Vec<u64> = (0..n)
            .map(|v| match kind {
                GraphAutKind::Decorated => {
                    let d = self.decoration(v);
                    ((d.e as u64) << 32) | ((d.l as u64) << 16) | d.i as u64
                }
                GraphAutKind::Underlying => 0,
            })
            .collect();
        let mut st = Structure::new(n, colors);
        for e in &self.edges {
            if let [Some(a), Some(b)] = e.slots {
                st.add_block(0, vec![a, b]);
            }
        }
        automorphism_group(&st)
    }
}

/// The completion of a loose graph: every free end replaced by a fresh vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub graph: LooseGraph,
    /// Vertices `0..original_vertices` of `graph` are the source's vertices.
    pub original_vertices: usize,
    /// `(edge index, slot)` of the source to the fresh completion vertex.
    pub end_vertex_of: HashMap<(usize, usize), usize>,
}

impl Completion {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
    pub fn is_original(&self, v: usize) -> bool {
        v < self.original_vertices
    }
    /// Completion vertex sitting at `slot` of source edge `edge`.
    pub fn slot_vertex(&self, edge: usize, slot: usize) -> usize {
        self.graph.edges[edge].slots[slot].expect("completion edges are closed")
    }
}

/// Complement of a loose graph in the projective F1-space spanned by its
/// completion. Vertices of the original graph become free ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementGraph {
    pub graph: LooseGraph,
    /// For each complement edge, the two ambient (completion) vertices it joins.
    pub ambient_ends: Vec<[usize; 2]>,
    /// For each complement vertex, its ambient index.
    pub ambient_vertex: Vec<usize>,
}
