use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub rng: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

/// Finite directed graph with no sources: every vertex receives an edge.
///
/// Vertices and edges are stored sorted by id, and [`Vertex`]/[`Edge`]
/// index into that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edge_ids: Vec<String>,
    src: Vec<Vertex>,
    rng: Vec<Vertex>,
    vertex_index: HashMap<String, Vertex>,
    edge_index: HashMap<String, Edge>,
}

impl Graph {
    pub fn new(doc: &GraphDoc) -> Result<Self> {
        if doc.vertices.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut vertices = doc.vertices.clone();
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{}`", w[0])));
            }
        }
        if vertices.iter().any(|v| v.is_empty()) {
            return Err(Error::InvalidGraph("empty vertex id".into()));
        }
        let vertex_index: HashMap<String, Vertex> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), Vertex(i))).collect();

        let mut edges = doc.edges.clone();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidGraph(format!("duplicate edge `{}`", w[0].id)));
            }
        }
        let mut edge_ids = Vec::with_capacity(edges.len());
        let mut src = Vec::with_capacity(edges.len());
        let mut rng = Vec::with_capacity(edges.len());
        for e in &edges {
            if e.id.is_empty() {
                return Err(Error::InvalidGraph("empty edge id".into()));
            }
            if vertex_index.contains_key(&e.id) {
                return Err(Error::InvalidGraph(format!("id `{}` names both a vertex and an edge", e.id)));
            }
            let s = *vertex_index.get(&e.src).ok_or_else(|| Error::UnknownVertex(e.src.clone()))?;
            let r = *vertex_index.get(&e.rng).ok_or_else(|| Error::UnknownVertex(e.rng.clone()))?;
            edge_ids.push(e.id.clone());
            src.push(s);
            rng.push(r);
        }
        let edge_index = edge_ids.iter().enumerate().map(|(i, e)| (e.clone(), Edge(i))).collect();
        let g = Graph { vertices, edge_ids, src, rng, vertex_index, edge_index };
        for v in g.vertices() {
            if g.edges_into(v).is_empty() {
                return Err(Error::InvalidGraph(format!("vertex `{}` is a source", g.vertex_name(v))));
            }
        }
        Ok(g)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(s)?;
        Graph::new(&doc)
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.vertices.clone(),
            edges: self
                .edges()
                .map(|e| EdgeDoc {
                    id: self.edge_name(e).to_string(),
                    src: self.vertex_name(self.src(e)).to_string(),
                    rng: self.vertex_name(self.rng(e)).to_string(),
                })
                .collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertices.len()).map(Vertex)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edge_ids.len()).map(Edge)
    }

    pub fn src(&self, e: Edge) -> Vertex {
        self.src[e.0]
    }

    pub fn rng(&self, e: Edge) -> Vertex {
        self.rng[e.0]
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge_name(&self, e: Edge) -> &str {
        &self.edge_ids[e.0]
    }

    pub fn vertex(&self, id: &str) -> Result<Vertex> {
        self.vertex_index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<Edge> {
        self.edge_index.get(id).copied().ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Edges with range `v` (the set `vE¹`).
    pub fn edges_into(&self, v: Vertex) -> Vec<Edge> {
        self.edges().filter(|&e| self.rng(e) == v).collect()
    }

    /// Edges with source `v` (the set `E¹v`).
    pub fn edges_from(&self, v: Vertex) -> Vec<Edge> {
        self.edges().filter(|&e| self.src(e) == v).collect()
    }

    pub fn vertex_path(&self, v: Vertex) -> Path {
        Path { rng: v, src: v, edges: Vec::new() }
    }

    pub fn edge_path(&self, e: Edge) -> Path {
        Path { rng: self.rng(e), src: self.src(e), edges: vec![e] }
    }

    /// Builds the path `e_1 … e_k` (with `s(e_i) = r(e_{i+1})`).
    pub fn path(&self, edges: &[Edge]) -> Result<Path> {
        let Some(&first) = edges.first() else {
            return Err(Error::Composability("empty edge list has no vertex".into()));
        };
        for w in edges.windows(2) {
            if self.src(w[0]) != self.rng(w[1]) {
                return Err(Error::Composability(format!(
                    "s({}) = {} but r({}) = {}",
                    self.edge_name(w[0]),
                    self.vertex_name(self.src(w[0])),
                    self.edge_name(w[1]),
                    self.vertex_name(self.rng(w[1]))
                )));
            }
        }
        Ok(Path { rng: self.rng(first), src: self.src(*edges.last().unwrap()), edges: edges.to_vec() })
    }

    pub fn is_path(&self, p: &Path) -> bool {
        match p.edges.first() {
            None => p.rng == p.src,
            Some(&f) => {
                self.rng(f) == p.rng
                    && self.src(*p.edges.last().unwrap()) == p.src
                    && p.edges.windows(2).all(|w| self.src(w[0]) == self.rng(w[1]))
            }
        }
    }

    /// `μν`, defined when `s(μ) = r(ν)`.
    pub fn concat(&self, mu: &Path, nu: &Path) -> Result<Path> {
        if mu.src != nu.rng {
            return Err(Error::Composability(format!(
                "s(μ) = {} but r(ν) = {}",
                self.vertex_name(mu.src),
                self.vertex_name(nu.rng)
            )));
        }
        let mut edges = mu.edges.clone();
        edges.extend_from_slice(&nu.edges);
        Ok(Path { rng: mu.rng, src: nu.src, edges })
    }

    /// All paths of length `d` with source `v`, in lexicographic edge order.
    pub fn paths_with_source(&self, v: Vertex, d: usize) -> Vec<Path> {
        let mut out = vec![self.vertex_path(v)];
        for _ in 0..d {
            let mut next = Vec::new();
            for p in &out {
                for e in self.edges_from(p.rng) {
                    let mut edges = Vec::with_capacity(p.edges.len() + 1);
                    edges.push(e);
                    edges.extend_from_slice(&p.edges);
                    next.push(Path { rng: self.rng(e), src: p.src, edges });
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.edges.cmp(&b.edges));
        out
    }

    /// All paths of length `d` with range `v`, in lexicographic edge order.
    pub fn paths_with_range(&self, v: Vertex, d: usize) -> Vec<Path> {
        let mut out = vec![self.vertex_path(v)];
        for _ in 0..d {
            let mut next = Vec::new();
            for p in &out {
                for e in self.edges_into(p.src) {
                    let mut q = p.clone();
                    q.edges.push(e);
                    q.src = self.src(e);
                    next.push(q);
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.edges.cmp(&b.edges));
        out
    }

    /// All paths of length exactly `d`, in lexicographic edge order.
    pub fn paths_of_length(&self, d: usize) -> Vec<Path> {
        let mut out: Vec<Path> = self.vertices().flat_map(|v| self.paths_with_source(v, d)).collect();
        out.sort_by(|a, b| a.edges.cmp(&b.edges).then(a.rng.cmp(&b.rng)));
        out
    }

    /// All paths of length at most `d`, shortest first.
    pub fn paths_up_to(&self, d: usize) -> Vec<Path> {
        (0..=d).flat_map(|k| self.paths_of_length(k)).collect()
    }

    pub fn display_path(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            return self.vertex_name(p.rng).to_string();
        }
        p.edges.iter().map(|&e| self.edge_name(e)).collect()
    }

    /// Parses a vertex id, `∅` (single-vertex graphs), or edge ids either
    /// separated by `,`, `.` or whitespace, or written back to back.
    pub fn parse_path(&self, s: &str) -> Result<Path> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            if self.num_vertices() == 1 {
                return Ok(self.vertex_path(Vertex(0)));
            }
            return Err(Error::PathSyntax(s.to_string()));
        }
        if let Ok(v) = self.vertex(s) {
            return Ok(self.vertex_path(v));
        }
        let mut edges = Vec::new();
        for tok in s.split(|c: char| c == ',' || c == '.' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            match self.edge(tok) {
                Ok(e) => edges.push(e),
                Err(_) => edges.extend(self.split_concatenated(tok)?),
            }
        }
        self.path(&edges)
    }

    fn split_concatenated(&self, tok: &str) -> Result<Vec<Edge>> {
        // longest match first, with backtracking
        fn go(g: &Graph, rest: &str, acc: &mut Vec<Edge>) -> bool {
            if rest.is_empty() {
                return true;
            }
            let mut cands: Vec<Edge> = g.edges().filter(|&e| rest.starts_with(g.edge_name(e))).collect();
            cands.sort_by_key(|&e| std::cmp::Reverse(g.edge_name(e).len()));
            for e in cands {
                acc.push(e);
                if go(g, &rest[g.edge_name(e).len()..], acc) {
                    return true;
                }
                acc.pop();
            }
            false
        }
        let mut acc = Vec::new();
        if go(self, tok, &mut acc) {
            Ok(acc)
        } else {
            Err(Error::PathSyntax(tok.to_string()))
        }
    }
}

/// A finite path `μ = e_1 e_2 … e_k` read right to left: `s(e_i) = r(e_{i+1})`.
/// A path of length zero is a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub(crate) rng: Vertex,
    pub(crate) src: Vertex,
    pub(crate) edges: Vec<Edge>,
}

impl Path {
    /// Unvalidated constructor. Use [`Graph::is_path`] to check it.
    pub fn from_raw(rng: Vertex, src: Vertex, edges: Vec<Edge>) -> Self {
        Path { rng, src, edges }
    }

    pub fn rng(&self) -> Vertex {
        self.rng
    }

    pub fn src(&self) -> Vertex {
        self.src
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The first edge and the remaining path (`μ = e ν`).
    pub fn split_first(&self, g: &Graph) -> Option<(Edge, Path)> {
        let (&e, rest) = self.edges.split_first()?;
        Some((e, Path { rng: g.src(e), src: self.src, edges: rest.to_vec() }))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "v{}", self.rng.0);
        }
        let parts: Vec<String> = self.edges.iter().map(|e| format!("e{}", e.0)).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex() -> Graph {
        Graph::from_json(
            r#"{"vertices":["v0","v1"],"edges":[
                {"id":"e0","src":"v0","rng":"v0"},{"id":"e1","src":"v1","rng":"v1"},
                {"id":"f0","src":"v0","rng":"v1"},{"id":"f1","src":"v1","rng":"v0"}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn rejects_unknown_keys_and_sources() {
        assert!(Graph::from_json(r#"{"vertices":["v"],"edges":[],"extra":1}"#).is_err());
        let e = Graph::from_json(r#"{"vertices":["v","w"],"edges":[{"id":"e","src":"v","rng":"v"}]}"#);
        assert!(matches!(e, Err(Error::InvalidGraph(_))));
        let e = Graph::from_json(r#"{"vertices":["v"],"edges":[{"id":"e","src":"x","rng":"v"}]}"#);
        assert!(matches!(e, Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn path_composability() {
        let g = two_vertex();
        let (e0, f0, f1) = (g.edge("e0").unwrap(), g.edge("f0").unwrap(), g.edge("f1").unwrap());
        // f0: v0 -> v1, f1: v1 -> v0
        assert!(g.path(&[f0, f1]).is_ok());
        assert!(g.path(&[e0, f0]).is_err());
        let p = g.path(&[f1, f0]).unwrap();
        assert_eq!(g.vertex_name(p.rng()), "v0");
        assert_eq!(g.vertex_name(p.src()), "v0");
    }

    #[test]
    fn enumeration_counts() {
        let g = two_vertex();
        for d in 0..5 {
            // each vertex receives two edges
            assert_eq!(g.paths_of_length(d).len(), 2 * 2usize.pow(d as u32));
            for p in g.paths_of_length(d) {
                assert!(g.is_path(&p));
                assert_eq!(p.len(), d);
            }
        }
        let v0 = g.vertex("v0").unwrap();
        let ps = g.paths_with_source(v0, 3);
        assert!(ps.iter().all(|p| p.src() == v0));
        assert!(ps.windows(2).all(|w| w[0].edges() < w[1].edges()));
        let ps = g.paths_with_range(v0, 3);
        assert!(ps.iter().all(|p| p.rng() == v0 && g.is_path(p)));
    }

    #[test]
    fn parse_forms() {
        let g = two_vertex();
        let a = g.parse_path("f1,f0").unwrap();
        let b = g.parse_path("f1f0").unwrap();
        assert_eq!(a, b);
        assert_eq!(g.display_path(&a), "f1f0");
        assert!(g.parse_path("v1").unwrap().is_vertex());
        assert!(g.parse_path("∅").is_err());
    }
}
