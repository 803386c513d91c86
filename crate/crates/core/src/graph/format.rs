//! Line-based text formats for loose graphs and their morphisms.
//!
//! ```text
//! # toy example
//! vertex x
//! vertex y
//! edge L x y
//! edge Lx x -
//! edge Ly y -
//! ```
//!
//! Morphism files name their source and target graph files (relative to the
//! morphism file) and list `vmap v v'`, `emap e e'` or `emap e @v'`. A third
//! token `swap` on an `emap` line reverses the slot correspondence of a
//! vertexless edge.

use std::collections::HashMap;
use std::path::Path;

use super::{EdgeImage, LooseGraph, LooseMorphism};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let t: Vec<&str> = l.split_whitespace().collect();
        (!t.is_empty()).then_some((i + 1, t))
    })
}

pub fn parse_graph(text: &str) -> Result<LooseGraph> {
    let mut vertices: Vec<String> = Vec::new();
    let mut vindex: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut enames: HashMap<String, usize> = HashMap::new();
    let mut pairs: HashMap<(usize, usize), String> = HashMap::new();
    for (line, t) in tokens(text) {
        match t.as_slice() {
            ["vertex", name] => {
                if *name == "-" || name.starts_with('@') {
                    return Err(parse_err(line, format!("`{name}` is not a valid vertex name")));
                }
                if vindex.contains_key(*name) || enames.contains_key(*name) {
                    return Err(parse_err(line, format!("duplicate name `{name}`")));
                }
                vindex.insert(name.to_string(), vertices.len());
                vertices.push(name.to_string());
            }
            ["edge", name, a, b] => {
                if enames.contains_key(*name) || vindex.contains_key(*name) {
                    return Err(parse_err(line, format!("duplicate name `{name}`")));
                }
                let mut ends = [None, None];
                for (s, end) in [a, b].iter().enumerate() {
                    if **end != "-" {
                        let v = vindex
                            .get(**end)
                            .ok_or_else(|| parse_err(line, format!("unknown vertex `{end}`")))?;
                        ends[s] = Some(*v);
                    }
                }
                if let [Some(u), Some(v)] = ends {
                    if u == v {
                        return Err(parse_err(line, format!("edge `{name}` is a loop")));
                    }
                    if let Some(prev) = pairs.insert((u.min(v), u.max(v)), name.to_string()) {
                        return Err(parse_err(
                            line,
                            format!("edges `{prev}` and `{name}` join the same pair of vertices"),
                        ));
                    }
                }
                enames.insert(name.to_string(), edges.len());
                edges.push((
                    name.to_string(),
                    ends.map(|e| e.map(|v: usize| vertices[v].clone())),
                ));
            }
            _ => return Err(parse_err(line, format!("malformed line `{}`", t.join(" ")))),
        }
    }
    LooseGraph::new(vertices, edges)
}

pub fn emit_graph(g: &LooseGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in g.edges() {
        let end = |s: Option<usize>| s.map_or("-".to_string(), |v| g.vertices()[v].clone());
        out.push_str(&format!("edge {} {} {}\n", e.name, end(e.slots[0]), end(e.slots[1])));
    }
    out
}

/// Parses a morphism; `load` resolves the `source` and `target` paths.
pub fn parse_morphism(text: &str, load: impl Fn(&str) -> Result<LooseGraph>) -> Result<LooseMorphism> {
    let mut source = None;
    let mut target = None;
    let mut vpairs = Vec::new();
    let mut epairs = Vec::new();
    for (line, t) in tokens(text) {
        match t.as_slice() {
            ["source", p] => source = Some(load(p).map_err(|e| parse_err(line, e.to_string()))?),
            ["target", p] => target = Some(load(p).map_err(|e| parse_err(line, e.to_string()))?),
            ["vmap", a, b] => vpairs.push((line, a.to_string(), b.to_string())),
            ["emap", a, b] => epairs.push((line, a.to_string(), b.to_string(), false)),
            ["emap", a, b, "swap"] => epairs.push((line, a.to_string(), b.to_string(), true)),
            _ => return Err(parse_err(line, format!("malformed line `{}`", t.join(" ")))),
        }
    }
    let source = source.ok_or_else(|| parse_err(0, "missing `source` line"))?;
    let target = target.ok_or_else(|| parse_err(0, "missing `target` line"))?;
    let mut vmap = vec![None; source.vertex_count()];
    for (line, a, b) in vpairs {
        let v = source.vertex_index(&a).map_err(|e| parse_err(line, e.to_string()))?;
        let w = target.vertex_index(&b).map_err(|e| parse_err(line, e.to_string()))?;
        if vmap[v].replace(w).is_some() {
            return Err(parse_err(line, format!("vertex `{a}` mapped twice")));
        }
    }
    let mut emap = vec![None; source.edges().len()];
    for (line, a, b, swap) in epairs {
        let e = source.edge_index(&a).map_err(|e| parse_err(line, e.to_string()))?;
        let img = match b.strip_prefix('@') {
            Some(v) => EdgeImage::Vertex(target.vertex_index(v).map_err(|e| parse_err(line, e.to_string()))?),
            None => EdgeImage::Edge {
                edge: target.edge_index(&b).map_err(|e| parse_err(line, e.to_string()))?,
                swap,
            },
        };
        if emap[e].replace(img).is_some() {
            return Err(parse_err(line, format!("edge `{a}` mapped twice")));
        }
    }
    let vmap = vmap
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::InvalidMorphism(format!("vertex `{}` has no image", source.vertices()[i]))))
        .collect::<Result<Vec<_>>>()?;
    let emap = emap
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::InvalidMorphism(format!("edge `{}` has no image", source.edges()[i].name))))
        .collect::<Result<Vec<_>>>()?;
    LooseMorphism::new(source, target, vmap, emap)
}

pub fn emit_morphism(f: &LooseMorphism, source_path: &str, target_path: &str) -> String {
    let mut out = format!("source {source_path}\ntarget {target_path}\n");
    for (v, &w) in f.vmap.iter().enumerate() {
        out.push_str(&format!("vmap {} {}\n", f.source.vertices()[v], f.target.vertices()[w]));
    }
    for (e, img) in f.emap.iter().enumerate() {
        let name = &f.source.edges()[e].name;
        match *img {
            EdgeImage::Vertex(w) => out.push_str(&format!("emap {name} @{}\n", f.target.vertices()[w])),
            EdgeImage::Edge { edge, swap } => {
                let flag = if swap && f.source.edges()[e].endpoint_count() == 0 { " swap" } else { "" };
                out.push_str(&format!("emap {name} {}{flag}\n", f.target.edges()[edge].name));
            }
        }
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<LooseGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

/// Reads a morphism file, resolving graph paths relative to its directory.
pub fn read_morphism(path: impl AsRef<Path>) -> Result<LooseMorphism> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_morphism(&text, |p| read_graph(dir.join(p)))
}
