//! Finite directed graphs, paths, and vertex-matrix combinatorics.
//!
//! Conventions follow the range/source bookkeeping of graph algebras: a path
//! `e1 e2 ... ek` is composable when `s(e_i) = r(e_{i+1})`, and the children
//! of a path `mu` in the forest are the paths `mu e` with `r(e) = s(mu)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::IntMat;

/// A finite directed graph with named vertices and edges.
///
/// Vertex and edge order is the declaration order of the input; every matrix
/// and enumeration in the crate uses it, so identical inputs give identical
/// outputs.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    vmap: HashMap<String, usize>,
    emap: HashMap<String, usize>,
    range: Vec<usize>,
    source: Vec<usize>,
    /// `from[v]` lists the edges e with r(e) = v, in declaration order (vE1).
    from: Vec<Vec<usize>>,
    /// Position of each edge inside `from[range(e)]`.
    pos_in_from: Vec<usize>,
}

impl DirectedGraph {
    /// Builds and validates a graph. With `strict` set, every vertex must
    /// have at least one edge ranging at it ("no sources").
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
        strict: bool,
    ) -> Result<Self> {
        let mut vmap = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::Parse("empty vertex id".into()));
            }
            if vmap.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.clone()));
            }
        }
        let mut emap = HashMap::new();
        let mut edge_names = Vec::new();
        let mut range = Vec::new();
        let mut source = Vec::new();
        for (i, (id, r, s)) in edges.iter().enumerate() {
            if id.is_empty() {
                return Err(Error::Parse("empty edge id".into()));
            }
            if emap.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
            let ri = *vmap.get(r).ok_or_else(|| Error::DanglingVertexRef(r.clone()))?;
            let si = *vmap.get(s).ok_or_else(|| Error::DanglingVertexRef(s.clone()))?;
            edge_names.push(id.clone());
            range.push(ri);
            source.push(si);
        }
        let mut from = vec![Vec::new(); vertices.len()];
        let mut pos_in_from = vec![0usize; edge_names.len()];
        for e in 0..edge_names.len() {
            pos_in_from[e] = from[range[e]].len();
            from[range[e]].push(e);
        }
        if strict {
            for (v, list) in from.iter().enumerate() {
                if list.is_empty() {
                    return Err(Error::SourceVertex(vertices[v].clone()));
                }
            }
        }
        Ok(DirectedGraph {
            vertex_names: vertices,
            edge_names,
            vmap,
            emap,
            range,
            source,
            from,
            pos_in_from,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_ix(&self, name: &str) -> Result<usize> {
        self.vmap
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge_ix(&self, name: &str) -> Result<usize> {
        self.emap
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn range(&self, e: usize) -> usize {
        self.range[e]
    }

    pub fn source(&self, e: usize) -> usize {
        self.source[e]
    }

    /// Edges e with r(e) = v, in declaration order.
    pub fn edges_from(&self, v: usize) -> &[usize] {
        &self.from[v]
    }

    pub fn edge_position(&self, e: usize) -> usize {
        self.pos_in_from[e]
    }

    /// Vertex matrix B with B(v, w) = |vE1w|.
    pub fn vertex_matrix(&self) -> IntMat {
        let n = self.vertex_count();
        let mut b = IntMat::zeros(n);
        for e in 0..self.edge_count() {
            *b.get_mut(self.range[e], self.source[e]) += 1;
        }
        b
    }

    /// Number of paths mu with r(mu) = v, s(mu) = w and |mu| = k; equals
    /// the (v, w) entry of B^k.
    pub fn count_paths(&self, v: usize, w: usize, k: usize) -> Result<u128> {
        if v >= self.vertex_count() || w >= self.vertex_count() {
            return Err(Error::UnknownVertex(format!("index {}", v.max(w))));
        }
        let b = self.vertex_matrix();
        let p = b.pow(k)?;
        Ok(p.get(v, w))
    }

    /// All paths of length k rooted at v, each extension in edge declaration
    /// order; the output order is deterministic across runs.
    pub fn enumerate_paths(&self, v: usize, k: usize) -> Result<Vec<Path>> {
        if v >= self.vertex_count() {
            return Err(Error::UnknownVertex(format!("index {v}")));
        }
        let mut level = vec![Path::empty(v)];
        for _ in 0..k {
            let mut next = Vec::new();
            for p in &level {
                for &e in self.edges_from(p.source()) {
                    next.push(p.extended(self, e));
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// All paths of length k, grouped by root vertex in declaration order.
    pub fn all_paths(&self, k: usize) -> Vec<Path> {
        let mut out = Vec::new();
        for v in 0..self.vertex_count() {
            out.extend(self.enumerate_paths(v, k).expect("valid vertex"));
        }
        out
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let reach = |start: usize, forward: bool| -> Vec<bool> {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for e in 0..self.edge_count() {
                    let (a, b) = if forward {
                        (self.range[e], self.source[e])
                    } else {
                        (self.source[e], self.range[e])
                    };
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            seen
        };
        reach(0, true).iter().all(|&x| x) && reach(0, false).iter().all(|&x| x)
    }
}

/// A composable edge sequence with its root vertex; the empty path at v has
/// range and source v and length 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    root: usize,
    edges: Vec<usize>,
    src: usize,
}

impl Path {
    pub fn empty(v: usize) -> Self {
        Path {
            root: v,
            edges: Vec::new(),
            src: v,
        }
    }

    /// Builds a path from edge indices, checking composability.
    pub fn from_edges(graph: &DirectedGraph, edges: Vec<usize>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Parse("cannot build an empty path without a root".into()));
        }
        let root = graph.range(edges[0]);
        for w in edges.windows(2) {
            if graph.source(w[0]) != graph.range(w[1]) {
                return Err(Error::Parse(format!(
                    "path not composable at `{}`.`{}`",
                    graph.edge_name(w[0]),
                    graph.edge_name(w[1])
                )));
            }
        }
        let src = graph.source(*edges.last().unwrap());
        Ok(Path { root, edges, src })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// r(mu): the root vertex.
    pub fn range(&self) -> usize {
        self.root
    }

    /// s(mu): the source of the last edge, or the root for the empty path.
    pub fn source(&self) -> usize {
        self.src
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn extended(&self, graph: &DirectedGraph, e: usize) -> Path {
        debug_assert_eq!(graph.range(e), self.src);
        let mut edges = self.edges.clone();
        edges.push(e);
        Path {
            root: self.root,
            edges,
            src: graph.source(e),
        }
    }

    /// Concatenation mu.nu, defined iff s(mu) = r(nu).
    pub fn concat(&self, other: &Path) -> Result<Path> {
        if self.src != other.root {
            return Err(Error::NonComposable(format!(
                "path sources/ranges do not match ({} vs {})",
                self.src, other.root
            )));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path {
            root: self.root,
            edges,
            src: other.src,
        })
    }

    /// If `prefix` is an initial segment of self, returns the remainder
    /// (whose root is s(prefix)).
    pub fn strip_prefix(&self, graph: &DirectedGraph, prefix: &Path) -> Option<Path> {
        if prefix.root != self.root || prefix.len() > self.len() {
            return None;
        }
        if self.edges[..prefix.len()] != prefix.edges[..] {
            return None;
        }
        let rest = self.edges[prefix.len()..].to_vec();
        let root = prefix.src;
        let src = rest.last().map(|&e| graph.source(e)).unwrap_or(root);
        Some(Path {
            root,
            edges: rest,
            src,
        })
    }

    /// Grammar form: `@v` for the empty path at v, otherwise dot-joined edge ids.
    pub fn display(&self, graph: &DirectedGraph) -> String {
        if self.edges.is_empty() {
            format!("@{}", graph.vertex_name(self.root))
        } else {
            self.edges
                .iter()
                .map(|&e| graph.edge_name(e).to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Parses the path grammar: `@<vertex>` or dot-separated edge ids.
    pub fn parse(graph: &DirectedGraph, text: &str) -> Result<Path> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix('@') {
            return Ok(Path::empty(graph.vertex_ix(v)?));
        }
        if text.is_empty() {
            return Err(Error::Parse("empty path (use @<vertex>)".into()));
        }
        let mut edges = Vec::new();
        for part in text.split('.') {
            edges.push(graph.edge_ix(part)?);
        }
        Path::from_edges(graph, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example3() -> DirectedGraph {
        DirectedGraph::new(
            vec!["v".into(), "w".into()],
            vec![
                ("1".into(), "v".into(), "v".into()),
                ("2".into(), "v".into(), "w".into()),
                ("3".into(), "w".into(), "v".into()),
                ("4".into(), "w".into(), "v".into()),
            ],
            true,
        )
        .unwrap()
    }

    #[test]
    fn loads_example3() {
        let g = example3();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 4);
        let b = g.vertex_matrix();
        assert_eq!(
            (b.get(0, 0), b.get(0, 1), b.get(1, 0), b.get(1, 1)),
            (1, 1, 2, 0)
        );
    }

    #[test]
    fn single_vertex_two_loops() {
        let g = DirectedGraph::new(
            vec!["v".into()],
            vec![
                ("x".into(), "v".into(), "v".into()),
                ("y".into(), "v".into(), "v".into()),
            ],
            true,
        )
        .unwrap();
        assert_eq!(g.vertex_matrix().get(0, 0), 2);
    }

    #[test]
    fn dangling_vertex_rejected() {
        let err = DirectedGraph::new(
            vec!["v".into()],
            vec![("1".into(), "v".into(), "u".into())],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DanglingVertexRef(u) if u == "u"));
    }

    #[test]
    fn source_vertex_strict() {
        // Vertex u has nothing ranging at it.
        let err = DirectedGraph::new(
            vec!["v".into(), "u".into()],
            vec![("1".into(), "v".into(), "u".into())],
            true,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SourceVertex(u) if u == "u"));
        assert!(DirectedGraph::new(
            vec!["v".into(), "u".into()],
            vec![("1".into(), "v".into(), "u".into())],
            false
        )
        .is_ok());
    }

    #[test]
    fn count_paths_matches_enumeration() {
        let g = example3();
        assert_eq!(g.count_paths(0, 0, 2).unwrap(), 3);
        assert_eq!(g.count_paths(0, 0, 0).unwrap(), 1);
        assert_eq!(g.count_paths(0, 1, 0).unwrap(), 0);
        for k in 0..=6 {
            let b = g.vertex_matrix().pow(k).unwrap();
            for v in 0..2 {
                let paths = g.enumerate_paths(v, k).unwrap();
                for w in 0..2 {
                    let cnt = paths.iter().filter(|p| p.source() == w).count() as u128;
                    assert_eq!(cnt, b.get(v, w));
                }
            }
        }
    }

    #[test]
    fn enumeration_order_is_declaration_order() {
        let g = example3();
        let paths = g.enumerate_paths(0, 2).unwrap();
        let shown: Vec<String> = paths.iter().map(|p| p.display(&g)).collect();
        assert_eq!(shown, vec!["1.1", "1.2", "2.3", "2.4"]);
        let empty = g.enumerate_paths(0, 0).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].is_empty());
        assert_eq!(empty[0].display(&g), "@v");
    }

    #[test]
    fn strong_connectivity() {
        assert!(example3().is_strongly_connected());
        let two = DirectedGraph::new(
            vec!["a".into(), "b".into()],
            vec![("1".into(), "a".into(), "b".into())],
            false,
        )
        .unwrap();
        assert!(!two.is_strongly_connected());
    }

    #[test]
    fn concat_law() {
        let g = example3();
        let p = Path::parse(&g, "1.2").unwrap();
        let q = Path::parse(&g, "3").unwrap();
        let pq = p.concat(&q).unwrap();
        assert_eq!(pq.display(&g), "1.2.3");
        assert_eq!(pq.len(), 3);
        // s("2") = w but r("1") = v, so "2"."1" is not composable.
        let two = Path::parse(&g, "2").unwrap();
        let one = Path::parse(&g, "1").unwrap();
        assert!(two.concat(&one).is_err());
        let at_w = Path::parse(&g, "@w").unwrap();
        assert_eq!(p.concat(&at_w).unwrap(), p);
        // Associativity and additivity on a chain.
        let r = Path::parse(&g, "1").unwrap();
        let lhs = p.concat(&q).unwrap().concat(&r).unwrap();
        let rhs = p.concat(&q.concat(&r).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.len(), p.len() + q.len() + r.len());
    }
}
