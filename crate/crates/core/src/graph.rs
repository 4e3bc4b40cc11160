//! Labeled complete and complete bipartite graphs.
//!
//! Vertices carry a [`Side`] tag: every vertex of a complete graph is on the
//! left side, and the right part of `K_{m,n}` is `1', ..., n'`. Edges are
//! stored with sorted endpoints and listed in lexicographic order, which fixes
//! the row/column order of every matrix built on top of a graph.

use std::collections::HashMap;
use std::fmt;

use crate::error::{invalid, Error, Result};

/// Largest edge count supported; edge subsets are stored as `u64` masks.
pub const MAX_EDGES: usize = 64;
/// Largest vertex count supported; vertex subsets are stored as `u64` masks.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub side: Side,
    pub label: u32,
}

impl Vertex {
    pub const fn left(label: u32) -> Self {
        Vertex { side: Side::Left, label }
    }

    pub const fn right(label: u32) -> Self {
        Vertex { side: Side::Right, label }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => write!(f, "{}", self.label),
            Side::Right => write!(f, "{}'", self.label),
        }
    }
}

/// An unordered pair of distinct vertices, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(invalid!("edge endpoints must differ, got {a} twice")),
        }
    }

    /// Shorthand for an edge between two left-side labels.
    pub fn between(a: u32, b: u32) -> Self {
        Edge::new(Vertex::left(a), Vertex::left(b)).expect("distinct labels")
    }

    /// Shorthand for the bipartite edge `{i, j'}`.
    pub const fn cross(i: u32, j: u32) -> Self {
        // Left sorts before Right, so the order is already canonical.
        Edge { lo: Vertex::left(i), hi: Vertex::right(j) }
    }

    pub fn lo(&self) -> Vertex {
        self.lo
    }

    pub fn hi(&self) -> Vertex {
        self.hi
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    /// Vertices shared with `other`.
    pub fn common(&self, other: &Edge) -> Vec<Vertex> {
        [self.lo, self.hi].into_iter().filter(|v| other.contains(*v)).collect()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Complete { n: usize },
    CompleteBipartite { m: usize, n: usize },
}

/// How two edges of a graph meet; indexes the entries of structured Hessians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairClass {
    Equal,
    /// Complete graphs: exactly one shared vertex.
    ShareVertex,
    /// Bipartite graphs: the shared vertex is in the left part.
    ShareLeft,
    /// Bipartite graphs: the shared vertex is in the right part.
    ShareRight,
    Disjoint,
}

#[derive(Debug, Clone)]
pub struct Graph {
    kind: GraphKind,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: HashMap<Vertex, usize>,
    edge_index: HashMap<Edge, usize>,
    endpoints: Vec<(usize, usize)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.vertices == other.vertices
    }
}

impl Eq for Graph {}

/// `K_n` on the vertices `1..=n`.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(invalid!("complete graph needs at least one vertex"));
    }
    let labels: Vec<u32> = (1..=n as u32).collect();
    Graph::complete_on(&labels)
}

/// `K_{m,n}` on left vertices `1..=m` and right vertices `1'..=n'`.
pub fn complete_bipartite_graph(m: usize, n: usize) -> Result<Graph> {
    if m == 0 || n == 0 {
        return Err(invalid!("complete bipartite graph needs both parts nonempty, got ({m}, {n})"));
    }
    let mut vertices: Vec<Vertex> = (1..=m as u32).map(Vertex::left).collect();
    vertices.extend((1..=n as u32).map(Vertex::right));
    let mut edges = Vec::with_capacity(m * n);
    for i in 1..=m as u32 {
        for j in 1..=n as u32 {
            edges.push(Edge::cross(i, j));
        }
    }
    Graph::build(GraphKind::CompleteBipartite { m, n }, vertices, edges)
}

/// Classify how `e` and `f` meet in `g`.
pub fn classify_edge_pair(g: &Graph, e: &Edge, f: &Edge) -> Result<PairClass> {
    for edge in [e, f] {
        if !g.contains_edge(edge) {
            return Err(invalid!("edge {edge} is not an edge of {g}"));
        }
    }
    if e == f {
        return Ok(PairClass::Equal);
    }
    let shared = e.common(f);
    Ok(match (g.kind, shared.as_slice()) {
        (_, []) => PairClass::Disjoint,
        (GraphKind::Complete { .. }, [_]) => PairClass::ShareVertex,
        (GraphKind::CompleteBipartite { .. }, [v]) => match v.side {
            Side::Left => PairClass::ShareLeft,
            Side::Right => PairClass::ShareRight,
        },
        _ => unreachable!("distinct edges share at most one vertex"),
    })
}

impl Graph {
    /// The complete graph on an arbitrary set of left-side labels.
    pub fn complete_on(labels: &[u32]) -> Result<Graph> {
        if labels.is_empty() {
            return Err(invalid!("complete graph needs at least one vertex"));
        }
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(invalid!("duplicate vertex labels in {labels:?}"));
        }
        let vertices: Vec<Vertex> = sorted.iter().copied().map(Vertex::left).collect();
        let mut edges = Vec::new();
        for (i, &a) in sorted.iter().enumerate() {
            for &b in &sorted[i + 1..] {
                edges.push(Edge::between(a, b));
            }
        }
        Graph::build(GraphKind::Complete { n: sorted.len() }, vertices, edges)
    }

    fn build(kind: GraphKind, vertices: Vec<Vertex>, mut edges: Vec<Edge>) -> Result<Graph> {
        if edges.len() > MAX_EDGES {
            return Err(Error::TooLarge(format!(
                "{} edges exceeds the supported maximum of {MAX_EDGES}",
                edges.len()
            )));
        }
        if vertices.len() > MAX_VERTICES {
            return Err(Error::TooLarge(format!(
                "{} vertices exceeds the supported maximum of {MAX_VERTICES}",
                vertices.len()
            )));
        }
        edges.sort_unstable();
        let vertex_index: HashMap<Vertex, usize> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let edge_index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let endpoints = edges
            .iter()
            .map(|e| (vertex_index[&e.lo], vertex_index[&e.hi]))
            .collect();
        Ok(Graph { kind, vertices, edges, vertex_index, edge_index, endpoints })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edge_index.contains_key(e)
    }

    pub fn edge_position(&self, e: &Edge) -> Option<usize> {
        self.edge_index.get(e).copied()
    }

    pub fn vertex_position(&self, v: Vertex) -> Option<usize> {
        self.vertex_index.get(&v).copied()
    }

    /// Endpoint positions (into [`Graph::vertices`]) of the edge at `idx`.
    pub fn endpoints(&self, idx: usize) -> (usize, usize) {
        self.endpoints[idx]
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.kind, GraphKind::CompleteBipartite { .. })
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GraphKind::Complete { n } => {
                let contiguous = self.vertices.iter().enumerate().all(|(i, v)| v.label as usize == i + 1);
                if contiguous {
                    write!(f, "K_{n}")
                } else {
                    let labels: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
                    write!(f, "K_{{{}}}", labels.join(","))
                }
            }
            GraphKind::CompleteBipartite { m, n } => write!(f, "K_{{{m},{n}}}"),
        }
    }
}
