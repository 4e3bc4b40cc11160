//! Spanning forests of complete and complete bipartite graphs.
//!
//! A [`Forest`] is an acyclic edge subset of a [`Graph`], always spanning the
//! full vertex set (isolated vertices are single-vertex components). Edge
//! subsets are `u64` masks over the graph's canonical edge order, and forests
//! are enumerated in lexicographic order of their sorted edge-index lists.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, Graph, GraphKind, Vertex};

/// Disjoint-set forest with undo, used by the backtracking enumerator.
#[derive(Debug, Clone)]
pub(crate) struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<Option<(usize, usize)>>,
}

impl RollbackDsu {
    pub(crate) fn new(len: usize) -> Self {
        RollbackDsu { parent: (0..len).collect(), size: vec![1; len], history: Vec::new() }
    }

    pub(crate) fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    /// Merge the sets of `a` and `b`; returns false (and records nothing
    /// useful) when they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            self.history.push(None);
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push(Some((ra, rb)));
        true
    }

    pub(crate) fn rollback(&mut self) {
        if let Some(Some((ra, rb))) = self.history.pop() {
            self.parent[rb] = rb;
            self.size[ra] -= self.size[rb];
        }
    }
}

fn mask_indices(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// Lexicographic comparison of the sorted index lists of two masks.
pub fn canonical_cmp(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let d = diff.trailing_zeros();
    let above = |m: u64| if d == 63 { 0 } else { m >> (d + 1) };
    if a & (1 << d) != 0 {
        // `b` continues past the common prefix with a larger index, or stops.
        if above(b) == 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    } else if above(a) == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// An acyclic spanning edge subset of a graph.
#[derive(Clone, Copy)]
pub struct Forest<'g> {
    graph: &'g Graph,
    mask: u64,
}

impl PartialEq for Forest<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && (std::ptr::eq(self.graph, other.graph) || self.graph == other.graph)
    }
}

impl Eq for Forest<'_> {}

impl std::hash::Hash for Forest<'_> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mask.hash(state);
    }
}

impl PartialOrd for Forest<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Forest<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self.mask, other.mask)
    }
}

impl fmt::Debug for Forest<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest{self}")
    }
}

impl fmt::Display for Forest<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", edges.join(", "))
    }
}

impl<'g> Forest<'g> {
    pub fn from_edges(graph: &'g Graph, edges: &[Edge]) -> Result<Self> {
        let mask = edge_mask(graph, edges)?;
        Self::from_mask(graph, mask)
    }

    pub fn from_mask(graph: &'g Graph, mask: u64) -> Result<Self> {
        if graph.edge_count() < 64 && mask >> graph.edge_count() != 0 {
            return Err(invalid!("edge mask {mask:#x} has bits outside the {} edges of {graph}", graph.edge_count()));
        }
        if !is_acyclic(graph, mask) {
            return Err(invalid!("edge set {:?} contains a cycle", mask_edges(graph, mask)));
        }
        Ok(Forest { graph, mask })
    }

    pub(crate) fn from_mask_unchecked(graph: &'g Graph, mask: u64) -> Self {
        debug_assert!(is_acyclic(graph, mask));
        Forest { graph, mask }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn edges(&self) -> Vec<Edge> {
        mask_edges(self.graph, self.mask)
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn component_count(&self) -> usize {
        self.graph.vertex_count() - self.edge_count()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.graph.edge_position(e).is_some_and(|i| self.mask & (1 << i) != 0)
    }

    /// The forest with `e` deleted. `e` must be present.
    pub fn without(&self, e: &Edge) -> Result<Self> {
        let i = self.position_of(e)?;
        if self.mask & (1 << i) == 0 {
            return Err(invalid!("edge {e} is not in forest {self}"));
        }
        Ok(Forest { graph: self.graph, mask: self.mask & !(1 << i) })
    }

    /// The forest with `e` added, or `None` if that closes a cycle or `e` is
    /// already present.
    pub fn with(&self, e: &Edge) -> Result<Option<Self>> {
        let i = self.position_of(e)?;
        if self.mask & (1 << i) != 0 {
            return Ok(None);
        }
        let (a, b) = self.graph.endpoints(i);
        if self.connected_positions(a, b) {
            return Ok(None);
        }
        Ok(Some(Forest { graph: self.graph, mask: self.mask | (1 << i) }))
    }

    /// Apply a vertex map to every edge. The map must send edges of the graph
    /// to edges of the graph; the image is checked for acyclicity.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Result<Self> {
        let images = self
            .edges()
            .into_iter()
            .map(|e| Edge::new(map(e.lo()), map(e.hi())))
            .collect::<Result<Vec<_>>>()?;
        Forest::from_edges(self.graph, &images)
    }

    fn position_of(&self, e: &Edge) -> Result<usize> {
        self.graph
            .edge_position(e)
            .ok_or_else(|| invalid!("edge {e} is not an edge of {}", self.graph))
    }

    /// Component representative of every vertex position.
    pub fn component_labels(&self) -> Vec<usize> {
        component_labels(self.graph, self.mask)
    }

    fn connected_positions(&self, a: usize, b: usize) -> bool {
        let labels = self.component_labels();
        labels[a] == labels[b]
    }

    pub fn connected(&self, a: Vertex, b: Vertex) -> Result<bool> {
        let pa = self.vertex_pos(a)?;
        let pb = self.vertex_pos(b)?;
        Ok(self.connected_positions(pa, pb))
    }

    fn vertex_pos(&self, v: Vertex) -> Result<usize> {
        self.graph
            .vertex_position(v)
            .ok_or_else(|| invalid!("vertex {v} is not in {}", self.graph))
    }

    /// The tree component containing `v`.
    pub fn component_of(&self, v: Vertex) -> Result<Tree<'g>> {
        let pos = self.vertex_pos(v)?;
        let labels = self.component_labels();
        let root = labels[pos];
        let vertices = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == root)
            .fold(0u64, |m, (i, _)| m | (1 << i));
        Ok(Tree::from_parts_unchecked(self.graph, vertices, edges_within(self.graph, self.mask, vertices)))
    }

    /// The components left after deleting `removed` from the forest, as trees.
    pub fn pieces_without(&self, removed: &[Edge]) -> Result<Pieces<'g>> {
        let mut mask = self.mask;
        for e in removed {
            let i = self.position_of(e)?;
            if mask & (1 << i) == 0 {
                return Err(invalid!("edge {e} is not in forest {self}"));
            }
            mask &= !(1 << i);
        }
        Ok(Pieces { forest: Forest { graph: self.graph, mask }, labels: component_labels(self.graph, mask) })
    }
}

/// Components of a forest after some edges were deleted.
pub struct Pieces<'g> {
    forest: Forest<'g>,
    labels: Vec<usize>,
}

impl<'g> Pieces<'g> {
    pub fn same_piece(&self, a: Vertex, b: Vertex) -> bool {
        let g = self.forest.graph;
        match (g.vertex_position(a), g.vertex_position(b)) {
            (Some(pa), Some(pb)) => self.labels[pa] == self.labels[pb],
            _ => false,
        }
    }

    pub fn piece_of(&self, v: Vertex) -> Result<Tree<'g>> {
        self.forest.component_of(v)
    }
}

/// A tree living inside a graph: a vertex subset plus a spanning tree on it.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Tree<'g> {
    graph: &'g Graph,
    vertices: u64,
    edges: u64,
}

impl fmt::Debug for Tree<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices().iter().map(|v| v.to_string()).collect();
        let es: Vec<String> = self.edges().iter().map(|e| e.to_string()).collect();
        write!(f, "Tree(vertices {{{}}}, edges {{{}}})", vs.join(", "), es.join(", "))
    }
}

impl<'g> Tree<'g> {
    /// Validate that `edges` form a spanning tree of `vertices`.
    pub fn new(graph: &'g Graph, vertices: &[Vertex], edges: &[Edge]) -> Result<Self> {
        let mut vmask = 0u64;
        for v in vertices {
            let p = graph.vertex_position(*v).ok_or_else(|| invalid!("vertex {v} is not in {graph}"))?;
            vmask |= 1 << p;
        }
        let emask = edge_mask(graph, edges)?;
        for i in mask_indices(emask) {
            let (a, b) = graph.endpoints(i);
            if vmask & (1 << a) == 0 || vmask & (1 << b) == 0 {
                return Err(invalid!("edge {} leaves the vertex set", graph.edges()[i]));
            }
        }
        if !is_acyclic(graph, emask) {
            return Err(invalid!("edges {edges:?} contain a cycle"));
        }
        if vmask == 0 || emask.count_ones() + 1 != vmask.count_ones() {
            return Err(invalid!("edges {edges:?} do not connect the vertex set {vertices:?}"));
        }
        Ok(Tree { graph, vertices: vmask, edges: emask })
    }

    fn from_parts_unchecked(graph: &'g Graph, vertices: u64, edges: u64) -> Self {
        Tree { graph, vertices, edges }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        mask_indices(self.vertices).map(|i| self.graph.vertices()[i]).collect()
    }

    pub fn edges(&self) -> Vec<Edge> {
        mask_edges(self.graph, self.edges)
    }

    pub fn edge_mask(&self) -> u64 {
        self.edges
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.graph.vertex_position(v).is_some_and(|p| self.vertices & (1 << p) != 0)
    }
}

/// Split a tree at one of its edges. Returns `(side containing e.lo, side
/// containing e.hi)`; the two vertex sets partition the tree's vertices.
pub fn split_tree_at_edge<'g>(tree: &Tree<'g>, e: &Edge) -> Result<(Tree<'g>, Tree<'g>)> {
    let g = tree.graph;
    let i = g.edge_position(e).ok_or_else(|| invalid!("edge {e} is not an edge of {g}"))?;
    if tree.edges & (1 << i) == 0 {
        return Err(invalid!("edge {e} is not in {tree:?}"));
    }
    if tree.edges.count_ones() + 1 != tree.vertices.count_ones() || !is_acyclic(g, tree.edges) {
        return Err(invalid!("{tree:?} is not connected"));
    }
    let rest = tree.edges & !(1 << i);
    let labels = component_labels(g, rest);
    let (a, b) = g.endpoints(i);
    let side = |root: usize| {
        let vertices = mask_indices(tree.vertices)
            .filter(|v| labels[*v] == labels[root])
            .fold(0u64, |m, v| m | (1 << v));
        Tree::from_parts_unchecked(g, vertices, edges_within(g, rest, vertices))
    };
    Ok((side(a), side(b)))
}

pub(crate) fn edge_mask(graph: &Graph, edges: &[Edge]) -> Result<u64> {
    let mut mask = 0u64;
    for e in edges {
        let i = graph
            .edge_position(e)
            .ok_or_else(|| invalid!("edge {e} is not an edge of {graph}"))?;
        mask |= 1 << i;
    }
    Ok(mask)
}

pub(crate) fn mask_edges(graph: &Graph, mask: u64) -> Vec<Edge> {
    mask_indices(mask).map(|i| graph.edges()[i]).collect()
}

fn edges_within(graph: &Graph, mask: u64, vertices: u64) -> u64 {
    mask_indices(mask)
        .filter(|&i| {
            let (a, b) = graph.endpoints(i);
            vertices & (1 << a) != 0 && vertices & (1 << b) != 0
        })
        .fold(0u64, |m, i| m | (1 << i))
}

fn is_acyclic(graph: &Graph, mask: u64) -> bool {
    let mut dsu = RollbackDsu::new(graph.vertex_count());
    mask_indices(mask).all(|i| {
        let (a, b) = graph.endpoints(i);
        dsu.union(a, b)
    })
}

fn component_labels(graph: &Graph, mask: u64) -> Vec<usize> {
    let mut dsu = RollbackDsu::new(graph.vertex_count());
    for i in mask_indices(mask) {
        let (a, b) = graph.endpoints(i);
        dsu.union(a, b);
    }
    let roots: Vec<usize> = (0..graph.vertex_count()).map(|v| dsu.find(v)).collect();
    let mut smallest: HashMap<usize, usize> = HashMap::new();
    for (v, r) in roots.iter().enumerate() {
        smallest.entry(*r).or_insert(v);
    }
    roots.iter().map(|r| smallest[r]).collect()
}

/// Backtracking search over edge subsets that extend `required` by exactly
/// `need` further edges avoiding `blocked`, keeping the set acyclic.
struct Search<'a> {
    graph: &'a Graph,
    candidates: Vec<usize>,
}

impl<'a> Search<'a> {
    /// Returns `None` when the required edges already contain a cycle.
    fn start(graph: &'a Graph, required: u64, blocked: u64) -> Option<(Self, RollbackDsu)> {
        let mut dsu = RollbackDsu::new(graph.vertex_count());
        for i in mask_indices(required) {
            let (a, b) = graph.endpoints(i);
            if !dsu.union(a, b) {
                return None;
            }
        }
        let candidates = (0..graph.edge_count())
            .filter(|i| (required | blocked) & (1 << i) == 0)
            .collect();
        Some((Search { graph, candidates }, dsu))
    }

    fn walk(&self, dsu: &mut RollbackDsu, from: usize, need: usize, mask: u64, visit: &mut impl FnMut(u64)) {
        if need == 0 {
            visit(mask);
            return;
        }
        let last = self.candidates.len() - need;
        for slot in from..=last {
            let i = self.candidates[slot];
            let (a, b) = self.graph.endpoints(i);
            if dsu.union(a, b) {
                self.walk(dsu, slot + 1, need - 1, mask | (1 << i), visit);
            }
            dsu.rollback();
        }
    }

    /// Visit in canonical order, parallel over the first free edge.
    fn collect_masks(&self, dsu: &RollbackDsu, need: usize, base: u64) -> Vec<u64> {
        if need == 0 {
            return vec![base];
        }
        if need > self.candidates.len() {
            return Vec::new();
        }
        let last = self.candidates.len() - need;
        let branches: Vec<Vec<u64>> = (0..=last)
            .into_par_iter()
            .map(|slot| {
                let mut dsu = dsu.clone();
                let i = self.candidates[slot];
                let (a, b) = self.graph.endpoints(i);
                let mut out = Vec::new();
                if dsu.union(a, b) {
                    self.walk(&mut dsu, slot + 1, need - 1, base | (1 << i), &mut |m| out.push(m));
                }
                out
            })
            .collect();
        branches.concat()
    }

    fn count(&self, dsu: &RollbackDsu, need: usize, filter: &(impl Fn(u64) -> bool + Sync)) -> u64 {
        if need == 0 {
            return 0;
        }
        if need > self.candidates.len() {
            return 0;
        }
        let last = self.candidates.len() - need;
        (0..=last)
            .into_par_iter()
            .map(|slot| {
                let mut dsu = dsu.clone();
                let i = self.candidates[slot];
                let (a, b) = self.graph.endpoints(i);
                let mut total = 0u64;
                if dsu.union(a, b) {
                    self.walk(&mut dsu, slot + 1, need - 1, 1 << i, &mut |m| {
                        if filter(m) {
                            total += 1;
                        }
                    });
                }
                total
            })
            .sum()
    }
}

fn check_component_range(g: &Graph, k: usize) -> Result<()> {
    if k == 0 || k > g.vertex_count() {
        return Err(invalid!(
            "component count k = {k} must satisfy 1 <= k <= {} for {g}",
            g.vertex_count()
        ));
    }
    Ok(())
}

/// All spanning forests of `g` with exactly `k` components, in canonical order.
pub fn enumerate_forests(g: &Graph, k: usize) -> Result<Vec<Forest<'_>>> {
    enumerate_forests_constrained(g, k, &[], &[])
}

/// Forests with `k` components containing every `required` edge and no
/// `forbidden` edge, in canonical order.
pub fn enumerate_forests_constrained<'g>(
    g: &'g Graph,
    k: usize,
    required: &[Edge],
    forbidden: &[Edge],
) -> Result<Vec<Forest<'g>>> {
    let (req, forb) = constraint_masks(g, k, required, forbidden)?;
    let need = g.vertex_count() - k;
    let req_count = req.count_ones() as usize;
    if req_count > need {
        return Ok(Vec::new());
    }
    let Some((search, dsu)) = Search::start(g, req, forb) else {
        return Ok(Vec::new());
    };
    Ok(search
        .collect_masks(&dsu, need - req_count, req)
        .into_iter()
        .map(|m| Forest::from_mask_unchecked(g, m))
        .collect())
}

fn constraint_masks(g: &Graph, k: usize, required: &[Edge], forbidden: &[Edge]) -> Result<(u64, u64)> {
    check_component_range(g, k)?;
    let req = edge_mask(g, required)?;
    let forb = edge_mask(g, forbidden)?;
    if req & forb != 0 {
        let both: Vec<String> = mask_edges(g, req & forb).iter().map(|e| e.to_string()).collect();
        return Err(invalid!("edges {} are both required and forbidden", both.join(", ")));
    }
    Ok((req, forb))
}

/// Number of `k`-component forests containing all of `required` and none of
/// `forbidden`.
pub fn count_forests_constrained(g: &Graph, k: usize, required: &[Edge], forbidden: &[Edge]) -> Result<BigUint> {
    let (req, forb) = constraint_masks(g, k, required, forbidden)?;
    Ok(BigUint::from(count_masks(g, k, req, forb, &|_| true)))
}

pub(crate) fn count_masks(g: &Graph, k: usize, req: u64, forb: u64, filter: &(impl Fn(u64) -> bool + Sync)) -> u64 {
    let need = g.vertex_count() - k;
    let req_count = req.count_ones() as usize;
    if req_count > need {
        return 0;
    }
    let Some((search, dsu)) = Search::start(g, req, forb) else {
        return 0;
    };
    let rest = need - req_count;
    if rest == 0 {
        return u64::from(filter(req));
    }
    search.count(&dsu, rest, &|m| filter(m | req))
}

/// Entries of the all-ones Hessian: forest counts through representative
/// edge pairs of each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairCounts {
    /// `p`: forests through `{1,2},{2,3}`; `q`: through `{1,2},{3,4}`.
    Complete { p: BigUint, q: BigUint },
    /// `p`: through `{1,1'},{1,2'}`; `q`: through `{1,1'},{2,1'}`;
    /// `r`: through `{1,1'},{2,2'}`.
    Bipartite { p: BigUint, q: BigUint, r: BigUint },
}

/// Representative edge pairs, in the order `p, q[, r]`.
pub fn representative_pairs(g: &Graph) -> Vec<(Edge, Edge)> {
    match g.kind() {
        GraphKind::Complete { .. } => vec![
            (Edge::between(1, 2), Edge::between(2, 3)),
            (Edge::between(1, 2), Edge::between(3, 4)),
        ],
        GraphKind::CompleteBipartite { .. } => vec![
            (Edge::cross(1, 1), Edge::cross(1, 2)),
            (Edge::cross(1, 1), Edge::cross(2, 1)),
            (Edge::cross(1, 1), Edge::cross(2, 2)),
        ],
    }
}

/// Check the size and component-count hypotheses of the main theorems.
pub fn check_theorem_range(g: &Graph, k: usize) -> Result<()> {
    match g.kind() {
        GraphKind::Complete { n } => {
            let has_anchor = (1..=4).all(|l| g.vertex_position(Vertex::left(l)).is_some());
            if n < 4 || !has_anchor {
                return Err(Error::InsufficientVertices(format!(
                    "{g} needs the vertices 1, 2, 3, 4 (n >= 4) for the edge pairs {{1,2}},{{2,3}},{{3,4}}"
                )));
            }
            if k == 0 || k + 2 >= n {
                return Err(invalid!("theorem hypothesis 0 < k < n - 2 fails for n = {n}, k = {k}"));
            }
        }
        GraphKind::CompleteBipartite { m, n } => {
            if m < 2 || n < 2 {
                return Err(Error::InsufficientVertices(format!(
                    "{g} needs both parts of size at least 2"
                )));
            }
            if k == 0 || k + 2 >= m + n {
                return Err(invalid!("theorem hypothesis 0 < k < m + n - 2 fails for m = {m}, n = {n}, k = {k}"));
            }
        }
    }
    Ok(())
}

/// The Hessian entry values `p, q[, r]` for `k`-component forests of `g`.
pub fn edge_pair_counts(g: &Graph, k: usize) -> Result<PairCounts> {
    check_theorem_range(g, k)?;
    let counts = representative_pairs(g)
        .into_iter()
        .map(|(e, f)| count_forests_constrained(g, k, &[e, f], &[]))
        .collect::<Result<Vec<_>>>()?;
    Ok(match counts.as_slice() {
        [p, q] => PairCounts::Complete { p: p.clone(), q: q.clone() },
        [p, q, r] => PairCounts::Bipartite { p: p.clone(), q: q.clone(), r: r.clone() },
        _ => unreachable!(),
    })
}

/// Closed-form counts of spanning trees of `K_w` through two adjacent
/// (`3 w^{w-4}`) and two disjoint (`4 w^{w-4}`) edges.
pub fn moon_tree_counts(w: usize) -> Result<(BigUint, BigUint)> {
    if w < 4 {
        return Err(invalid!("tree counts through two fixed edge pairs need w >= 4, got {w}"));
    }
    let base = BigUint::from(w).pow((w - 4) as u32);
    Ok((&base * 3u32, &base * 4u32))
}

/// The split `p = 3t + f`, `q = 4t + f` of the complete-graph entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub t: BigUint,
    pub f: BigUint,
}

impl Decomposition {
    /// Whether `p = 3t + f` and `q = 4t + f` hold for the given counts.
    pub fn matches(&self, counts: &PairCounts) -> bool {
        match counts {
            PairCounts::Complete { p, q } => {
                *p == &self.t * 3u32 + &self.f && *q == &self.t * 4u32 + &self.f
            }
            PairCounts::Bipartite { .. } => false,
        }
    }
}

/// Number of `j`-component spanning forests on a vertex set of the given size.
/// The empty vertex set carries exactly one forest, with zero components.
pub fn forest_count_on(size: usize, j: usize) -> Result<BigUint> {
    if size == 0 {
        return Ok(if j == 0 { BigUint::one() } else { BigUint::zero() });
    }
    if j == 0 || j > size {
        return Ok(BigUint::zero());
    }
    let labels: Vec<u32> = (1..=size as u32).collect();
    let g = Graph::complete_on(&labels)?;
    count_forests_constrained(&g, j, &[], &[])
}

/// Size of `F'_W`: two-component forests on `K_W` whose first tree contains
/// `{1,2}` and `{2,3}` while vertex 4 lies in the other tree.
pub fn adjacent_split_forest_count(w: &[u32]) -> Result<BigUint> {
    let g = anchored_complete(w)?;
    let req = edge_mask(&g, &[Edge::between(1, 2), Edge::between(2, 3)])?;
    let (p1, p4) = (pos(&g, 1), pos(&g, 4));
    let n = count_masks(&g, 2, req, 0, &|m| {
        let labels = component_labels(&g, m);
        labels[p1] != labels[p4]
    });
    Ok(BigUint::from(n))
}

fn pos(g: &Graph, label: u32) -> usize {
    g.vertex_position(Vertex::left(label)).expect("anchor vertex present")
}

pub(crate) fn anchored_complete(w: &[u32]) -> Result<Graph> {
    if !(1..=4).all(|l| w.contains(&l)) {
        return Err(invalid!("vertex set {w:?} must contain 1, 2, 3, 4"));
    }
    Graph::complete_on(w)
}

/// Subsets `W` with `{1,2,3,4} ⊆ W ⊆ {1..n}`, in increasing bitmask order of
/// the optional part.
pub fn anchored_subsets(n: usize) -> Vec<Vec<u32>> {
    let extra: Vec<u32> = (5..=n as u32).collect();
    (0u64..(1 << extra.len()))
        .map(|bits| {
            let mut w = vec![1, 2, 3, 4];
            w.extend(mask_indices(bits).map(|i| extra[i]));
            w
        })
        .collect()
}

/// Compute `t = Σ_W |W|^{|W|-4} #F^{(k-1)}(W^c)` and
/// `f = Σ_W #F'_W #F^{(k-2)}(W^c)` over `{1,2,3,4} ⊆ W ⊆ {1..n}`.
pub fn pq_decomposition(n: usize, k: usize) -> Result<Decomposition> {
    if n < 4 {
        return Err(Error::InsufficientVertices(format!("decomposition needs n >= 4, got {n}")));
    }
    if k == 0 || k + 2 >= n {
        return Err(invalid!("theorem hypothesis 0 < k < n - 2 fails for n = {n}, k = {k}"));
    }
    let mut rest_counts: HashMap<(usize, usize), BigUint> = HashMap::new();
    let mut rest = |size: usize, j: Option<usize>| -> Result<BigUint> {
        let Some(j) = j else { return Ok(BigUint::zero()) };
        if let Some(c) = rest_counts.get(&(size, j)) {
            return Ok(c.clone());
        }
        let c = forest_count_on(size, j)?;
        rest_counts.insert((size, j), c.clone());
        Ok(c)
    };
    let mut t = BigUint::zero();
    let mut f = BigUint::zero();
    for w in anchored_subsets(n) {
        let size = w.len();
        let outside = n - size;
        let t_w = BigUint::from(size).pow((size - 4) as u32);
        t += t_w * rest(outside, k.checked_sub(1))?;
        let tail = rest(outside, k.checked_sub(2))?;
        if !tail.is_zero() {
            f += adjacent_split_forest_count(&w)? * tail;
        }
    }
    Ok(Decomposition { t, f })
}
