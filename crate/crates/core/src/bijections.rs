//! Forest families behind the sign arguments, and element-wise verification
//! of the bijections between them.
//!
//! Complete graphs use the anchor vertices `1, 2, 3, 4`. Complete bipartite
//! graphs use `a = 1`, `b = 1'`, `c = 2`, `d = 2'`, so that
//! `P ∋ ab, ad`, `Q ∋ ab, cb` and `R ∋ ab, cd`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::forest::{
    count_forests_constrained, enumerate_forests, enumerate_forests_constrained, forest_count_on,
    representative_pairs, split_tree_at_edge, Forest, PairCounts,
};
use crate::graph::{Edge, Graph, GraphKind, Vertex};

/// Which step of a bijection check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// The forward map could not be applied.
    Forward,
    /// The inverse map could not be applied.
    Backward,
    /// The forward image left the target family.
    ForwardImage,
    /// The inverse image left the source family.
    BackwardImage,
    /// `g(f(x)) != x`.
    ForwardRoundTrip,
    /// `f(g(y)) != y`.
    BackwardRoundTrip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionFailure {
    pub stage: Stage,
    /// The forest the failing map was applied to.
    pub forest: String,
    pub detail: String,
}

/// Result of checking a pair of maps element by element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionRecord {
    pub name: String,
    pub domain_size: usize,
    pub codomain_size: usize,
    pub failures: Vec<BijectionFailure>,
}

impl BijectionRecord {
    pub fn is_verified(&self) -> bool {
        self.failures.is_empty() && self.domain_size == self.codomain_size
    }
}

impl fmt::Display for BijectionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.domain_size, self.codomain_size)?;
        match self.failures.first() {
            None => write!(f, ", verified"),
            Some(x) => write!(
                f,
                ", {} failures (first: {:?} on {}: {})",
                self.failures.len(),
                x.stage,
                x.forest,
                x.detail
            ),
        }
    }
}

type Map<'a, 'g> = dyn Fn(&Forest<'g>) -> std::result::Result<Forest<'g>, String> + Sync + 'a;

/// Apply `f` to every element of `domain` and `g` to every element of
/// `codomain`, checking images and both round trips.
fn verify_pair<'g>(
    name: &str,
    domain: &[Forest<'g>],
    codomain: &[Forest<'g>],
    f: &Map<'_, 'g>,
    g: &Map<'_, 'g>,
) -> BijectionRecord {
    let dom: HashSet<u64> = domain.iter().map(Forest::mask).collect();
    let cod: HashSet<u64> = codomain.iter().map(Forest::mask).collect();
    let fail = |stage, x: &Forest<'g>, detail: String| BijectionFailure { stage, forest: x.to_string(), detail };
    let one_way = |items: &[Forest<'g>],
                   there: &Map<'_, 'g>,
                   back: &Map<'_, 'g>,
                   target: &HashSet<u64>,
                   stages: [Stage; 3]|
     -> Vec<BijectionFailure> {
        items
            .par_iter()
            .filter_map(|x| {
                let y = match there(x) {
                    Ok(y) => y,
                    Err(e) => return Some(fail(stages[0], x, e)),
                };
                if !target.contains(&y.mask()) {
                    return Some(fail(stages[1], x, format!("image {y} is outside the target family")));
                }
                match back(&y) {
                    Ok(z) if z == *x => None,
                    Ok(z) => Some(fail(stages[2], x, format!("round trip gave {z} via {y}"))),
                    Err(e) => Some(fail(stages[2], x, format!("inverse failed on {y}: {e}"))),
                }
            })
            .collect()
    };
    let mut failures = one_way(domain, f, g, &cod, [Stage::Forward, Stage::ForwardImage, Stage::ForwardRoundTrip]);
    failures.extend(one_way(codomain, g, f, &dom, [
        Stage::Backward,
        Stage::BackwardImage,
        Stage::BackwardRoundTrip,
    ]));
    BijectionRecord { name: name.to_string(), domain_size: dom.len(), codomain_size: cod.len(), failures }
}

fn swap_edge<'g>(x: &Forest<'g>, remove: &Edge, add: &Edge) -> std::result::Result<Forest<'g>, String> {
    if !x.contains(remove) {
        return Err(format!("edge {remove} is missing"));
    }
    let without = x.without(remove).map_err(|e| e.to_string())?;
    without
        .with(add)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("adding {add} after removing {remove} closes a cycle or duplicates an edge"))
}

/// One named consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

/// Whether `whole` is the disjoint union of `parts`.
fn partition_check(name: &str, whole: &[Forest<'_>], parts: &[&[Forest<'_>]]) -> Check {
    let target: HashSet<u64> = whole.iter().map(Forest::mask).collect();
    let mut seen = HashSet::new();
    let mut overlaps = 0usize;
    for part in parts {
        for x in part.iter() {
            if !seen.insert(x.mask()) {
                overlaps += 1;
            }
        }
    }
    let sizes: Vec<String> = parts.iter().map(|p| p.len().to_string()).collect();
    check(
        name,
        overlaps == 0 && seen == target,
        format!("{} = {} (overlaps: {overlaps})", target.len(), sizes.join(" + ")),
    )
}

fn intersection_check(name: &str, expected: &[Forest<'_>], left: &[Forest<'_>], right: &[Forest<'_>]) -> Check {
    let l: HashSet<u64> = left.iter().map(Forest::mask).collect();
    let r: HashSet<u64> = right.iter().map(Forest::mask).collect();
    let both: HashSet<u64> = l.intersection(&r).copied().collect();
    let e: HashSet<u64> = expected.iter().map(Forest::mask).collect();
    check(name, both == e, format!("{} vs {}", e.len(), both.len()))
}

// ---------------------------------------------------------------------------
// Complete graphs

/// Pair counts by constrained counting, also outside the theorem range.
fn pair_counts(g: &Graph, k: usize) -> Result<PairCounts> {
    let counts = representative_pairs(g)
        .into_iter()
        .map(|(e, f)| count_forests_constrained(g, k, &[e, f], &[]))
        .collect::<Result<Vec<_>>>()?;
    Ok(match counts.as_slice() {
        [p, q] => PairCounts::Complete { p: p.clone(), q: q.clone() },
        [p, q, r] => PairCounts::Bipartite { p: p.clone(), q: q.clone(), r: r.clone() },
        _ => unreachable!("two or three representative pairs"),
    })
}

fn anchor(l: u32) -> Vertex {
    Vertex::left(l)
}

/// Families on `K_W` embedded in `K_n`: forests whose edges stay inside `W`.
#[derive(Debug, Clone)]
pub struct AnchoredFamilies<'g> {
    pub w: Vec<u32>,
    /// Spanning trees of `W` through `{1,2}` and `{2,3}`.
    pub trees_adjacent: Vec<Forest<'g>>,
    /// Spanning trees of `W` through `{1,2}` and `{3,4}`.
    pub trees_disjoint: Vec<Forest<'g>>,
    /// Two-tree forests of `W`: `{1,2},{2,3}` in one tree, `4` in the other.
    pub split_adjacent: Vec<Forest<'g>>,
    /// Two-tree forests of `W`: `{1,2}` in one tree, `{3,4}` in the other.
    pub split_disjoint: Vec<Forest<'g>>,
}

#[derive(Debug, Clone)]
pub struct CompleteFamilies<'g> {
    pub graph: &'g Graph,
    pub k: usize,
    /// Forests through `{1,2}` and `{2,3}`.
    pub p: Vec<Forest<'g>>,
    /// Forests through `{1,2}` and `{3,4}`.
    pub r: Vec<Forest<'g>>,
    pub anchored: Vec<AnchoredFamilies<'g>>,
}

fn edges_outside(g: &Graph, w: &[u32]) -> Vec<Edge> {
    g.edges()
        .iter()
        .filter(|e| !(w.contains(&e.lo().label) && w.contains(&e.hi().label)))
        .copied()
        .collect()
}

fn complete_size(g: &Graph) -> Result<usize> {
    match g.kind() {
        GraphKind::Complete { n } if (1..=4).all(|l| g.vertex_position(anchor(l)).is_some()) => Ok(n),
        GraphKind::Complete { .. } => Err(invalid!("{g} must contain the vertices 1, 2, 3, 4")),
        GraphKind::CompleteBipartite { .. } => Err(invalid!("{g} is not a complete graph")),
    }
}

fn check_anchored(g: &Graph, w: &[u32]) -> Result<()> {
    if !(1..=4).all(|l| w.contains(&l)) {
        return Err(invalid!("W = {w:?} must contain 1, 2, 3, 4"));
    }
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != w.len() {
        return Err(invalid!("W = {w:?} repeats a vertex"));
    }
    if let Some(v) = w.iter().find(|&&l| g.vertex_position(anchor(l)).is_none()) {
        return Err(invalid!("W contains {v}, which is not a vertex of {g}"));
    }
    Ok(())
}

/// The four families attached to `W` (`{1,2,3,4} ⊆ W`), as forests of `g`.
pub fn anchored_families<'g>(g: &'g Graph, w: &[u32]) -> Result<AnchoredFamilies<'g>> {
    let n = complete_size(g)?;
    check_anchored(g, w)?;
    let outside = edges_outside(g, w);
    let tree_k = n - w.len() + 1;
    let (e12, e23, e34) = (Edge::between(1, 2), Edge::between(2, 3), Edge::between(3, 4));
    let trees_adjacent = enumerate_forests_constrained(g, tree_k, &[e12, e23], &outside)?;
    let trees_disjoint = enumerate_forests_constrained(g, tree_k, &[e12, e34], &outside)?;
    let mut split_adjacent = enumerate_forests_constrained(g, tree_k + 1, &[e12, e23], &outside)?;
    split_adjacent.retain(|x| !x.connected(anchor(1), anchor(4)).expect("anchor present"));
    let mut split_disjoint = enumerate_forests_constrained(g, tree_k + 1, &[e12, e34], &outside)?;
    split_disjoint.retain(|x| !x.connected(anchor(1), anchor(3)).expect("anchor present"));
    Ok(AnchoredFamilies { w: w.to_vec(), trees_adjacent, trees_disjoint, split_adjacent, split_disjoint })
}

fn union_forest<'g>(g: &'g Graph, parts: &[Vec<Edge>]) -> std::result::Result<Forest<'g>, String> {
    let edges: Vec<Edge> = parts.iter().flatten().copied().collect();
    Forest::from_edges(g, &edges).map_err(|e| e.to_string())
}

/// Edges of `x` lying in neither listed component; nonempty only when the
/// two components do not cover `W`.
fn leftover_edges(x: &Forest<'_>, covered: u64) -> Vec<Edge> {
    let g = x.graph();
    x.edges()
        .into_iter()
        .filter(|e| g.edge_position(e).is_some_and(|i| covered & (1 << i) == 0))
        .collect()
}

/// `f(T) = T_a^{12} ⊔ ({3,4} ∪ T_a^{3} ∪ T_b)`.
fn forestbij_forward<'g>(x: &Forest<'g>) -> std::result::Result<Forest<'g>, String> {
    let g = x.graph();
    let t_a = x.component_of(anchor(1)).map_err(|e| e.to_string())?;
    let t_b = x.component_of(anchor(4)).map_err(|e| e.to_string())?;
    if t_a.contains_vertex(anchor(4)) {
        return Err("vertex 4 lies in the tree of 1".into());
    }
    let (with_2, with_3) = split_tree_at_edge(&t_a, &Edge::between(2, 3)).map_err(|e| e.to_string())?;
    if !with_2.edges().contains(&Edge::between(1, 2)) {
        return Err("{1,2} is not on the side of 2".into());
    }
    let rest = leftover_edges(x, t_a.edge_mask() | t_b.edge_mask());
    union_forest(g, &[with_2.edges(), vec![Edge::between(3, 4)], with_3.edges(), t_b.edges(), rest])
}

/// `g(T) = ({2,3} ∪ T_d^{3} ∪ T_c) ⊔ T_d^{4}`.
fn forestbij_backward<'g>(x: &Forest<'g>) -> std::result::Result<Forest<'g>, String> {
    let g = x.graph();
    let t_c = x.component_of(anchor(1)).map_err(|e| e.to_string())?;
    let t_d = x.component_of(anchor(3)).map_err(|e| e.to_string())?;
    if t_c.contains_vertex(anchor(3)) {
        return Err("{1,2} and {3,4} lie in the same tree".into());
    }
    let (with_3, with_4) = split_tree_at_edge(&t_d, &Edge::between(3, 4)).map_err(|e| e.to_string())?;
    let rest = leftover_edges(x, t_c.edge_mask() | t_d.edge_mask());
    union_forest(g, &[vec![Edge::between(2, 3)], with_3.edges(), t_c.edges(), with_4.edges(), rest])
}

/// Verify `f: F'_W -> F''_W` and its inverse on the complete graph over `W`.
pub fn bijection_forestbij(w: &[u32]) -> Result<BijectionRecord> {
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    let g = Graph::complete_on(&sorted)?;
    let fam = anchored_families(&g, w)?;
    Ok(forestbij_on(&fam))
}

fn forestbij_on(fam: &AnchoredFamilies<'_>) -> BijectionRecord {
    let name = format!("forestbij W={:?}", fam.w);
    verify_pair(&name, &fam.split_adjacent, &fam.split_disjoint, &forestbij_forward, &forestbij_backward)
}

impl<'g> CompleteFamilies<'g> {
    pub fn forestbij_records(&self) -> Vec<BijectionRecord> {
        self.anchored.iter().map(forestbij_on).collect()
    }

    /// Partition checks, counts against the pair counts, and the element-wise
    /// split of `P` and `R` by the vertex set `W` of the anchored trees.
    pub fn verify(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let n = self.graph.vertex_count();
        if let PairCounts::Complete { p, q } = pair_counts(self.graph, self.k)? {
            checks.push(check("#P = p", BigUint::from(self.p.len()) == p, format!("{} vs {p}", self.p.len())));
            checks.push(check("#R = q", BigUint::from(self.r.len()) == q, format!("{} vs {q}", self.r.len())));
        }
        for (family, sep) in [(&self.p, 4u32), (&self.r, 3u32)] {
            let label = if sep == 4 { "P" } else { "R" };
            // (W, split?) -> observed count
            let mut observed: BTreeMap<(Vec<u32>, bool), usize> = BTreeMap::new();
            for x in family {
                let c1 = x.component_of(anchor(1))?;
                let mut w: Vec<u32> = c1.vertices().iter().map(|v| v.label).collect();
                let split = !c1.contains_vertex(anchor(sep));
                if split {
                    w.extend(x.component_of(anchor(sep))?.vertices().iter().map(|v| v.label));
                    w.sort_unstable();
                }
                *observed.entry((w, split)).or_default() += 1;
            }
            let mut all_match = true;
            let mut total = BigUint::zero();
            for fam in &self.anchored {
                let rest = n - fam.w.len();
                let (trees, splits) = if sep == 4 {
                    (&fam.trees_adjacent, &fam.split_adjacent)
                } else {
                    (&fam.trees_disjoint, &fam.split_disjoint)
                };
                for (split, size, j) in [(false, trees.len(), self.k.checked_sub(1)), (true, splits.len(), self.k.checked_sub(2))] {
                    let rest_count = match j {
                        Some(j) => forest_count_on(rest, j)?,
                        None => BigUint::zero(),
                    };
                    let expected = BigUint::from(size) * rest_count;
                    let got = BigUint::from(observed.remove(&(fam.w.clone(), split)).unwrap_or(0));
                    all_match &= got == expected;
                    total += expected;
                }
            }
            all_match &= observed.is_empty();
            checks.push(check(
                format!("{label} splits over W"),
                all_match && total == BigUint::from(family.len()),
                format!("{} forests, {} by the product formula", family.len(), total),
            ));
        }
        Ok(checks)
    }
}

// ---------------------------------------------------------------------------
// Complete bipartite graphs

#[derive(Debug, Clone, Copy)]
struct Anchors {
    a: Vertex,
    b: Vertex,
    c: Vertex,
    d: Vertex,
    ab: Edge,
    ad: Edge,
    cb: Edge,
    cd: Edge,
}

const ANCHORS: Anchors = Anchors {
    a: Vertex::left(1),
    b: Vertex::right(1),
    c: Vertex::left(2),
    d: Vertex::right(2),
    ab: Edge::cross(1, 1),
    ad: Edge::cross(1, 2),
    cb: Edge::cross(2, 1),
    cd: Edge::cross(2, 2),
};

#[derive(Debug, Clone)]
pub struct BipartiteFamilies<'g> {
    pub graph: &'g Graph,
    pub k: usize,
    pub p: Vec<Forest<'g>>,
    pub q: Vec<Forest<'g>>,
    pub r: Vec<Forest<'g>>,
    /// `ab, ad, cd`
    pub z: Vec<Forest<'g>>,
    /// `ab, cb, cd`
    pub z_prime: Vec<Forest<'g>>,
    /// `ab, ad`, not `cd`
    pub p_prime: Vec<Forest<'g>>,
    /// `ab, cd`, not `ad`
    pub r_prime: Vec<Forest<'g>>,
    /// `ab, cd`, not `cb`
    pub r_double_prime: Vec<Forest<'g>>,
    /// `ab, cb`, not `cd`
    pub q_prime: Vec<Forest<'g>>,
    /// `P_1..P_4`
    pub p_parts: [Vec<Forest<'g>>; 4],
    /// `Q_1..Q_4`
    pub q_parts: [Vec<Forest<'g>>; 4],
    /// `R_1..R_5`, classes of `R'`
    pub r_parts: [Vec<Forest<'g>>; 5],
    /// `R'_1..R'_5`, classes of `R''`
    pub r_prime_parts: [Vec<Forest<'g>>; 5],
}

/// Class of `x ∈ P'` by where `c` sits once `ab, ad` are removed.
fn p_class(x: &Forest<'_>) -> Result<usize> {
    let s = ANCHORS;
    let pieces = x.pieces_without(&[s.ab, s.ad])?;
    Ok(if pieces.same_piece(s.c, s.a) {
        1
    } else if pieces.same_piece(s.c, s.b) {
        2
    } else if pieces.same_piece(s.c, s.d) {
        4
    } else {
        3
    })
}

/// Class of `x ∈ Q'` by where `d` sits once `ab, cb` are removed.
fn q_class(x: &Forest<'_>) -> Result<usize> {
    let s = ANCHORS;
    let pieces = x.pieces_without(&[s.ab, s.cb])?;
    Ok(if pieces.same_piece(s.d, s.a) {
        1
    } else if pieces.same_piece(s.d, s.b) {
        2
    } else if pieces.same_piece(s.d, s.c) {
        4
    } else {
        3
    })
}

/// Class of a forest through `ab, cd` by where `c` and `d` sit once both
/// edges are removed.
fn r_class(x: &Forest<'_>) -> Result<usize> {
    let s = ANCHORS;
    let pieces = x.pieces_without(&[s.ab, s.cd])?;
    let place = |v| {
        if pieces.same_piece(v, s.a) {
            'A'
        } else if pieces.same_piece(v, s.b) {
            'B'
        } else {
            'O'
        }
    };
    match (place(s.c), place(s.d)) {
        ('A', 'O') => Ok(1),
        ('B', 'O') => Ok(2),
        ('O', 'O') => Ok(3),
        ('O', 'A') => Ok(4),
        ('O', 'B') => Ok(5),
        (pc, pd) => Err(Error::StructureViolation(format!(
            "forest {x} puts c in piece {pc} and d in piece {pd}"
        ))),
    }
}

fn classify<'g, const N: usize>(
    items: &[Forest<'g>],
    class: impl Fn(&Forest<'g>) -> Result<usize>,
) -> Result<[Vec<Forest<'g>>; N]> {
    let mut parts: [Vec<Forest<'g>>; N] = std::array::from_fn(|_| Vec::new());
    for x in items {
        parts[class(x)? - 1].push(*x);
    }
    Ok(parts)
}

fn bipartite_families(g: &Graph, k: usize) -> Result<BipartiteFamilies<'_>> {
    let s = ANCHORS;
    let all = enumerate_forests(g, k)?;
    let select = |pred: &(dyn Fn(&Forest<'_>) -> bool + Sync)| -> Vec<Forest<'_>> {
        all.par_iter().filter(|x| pred(x)).copied().collect()
    };
    let has = |x: &Forest<'_>, e: &Edge| x.contains(e);
    let p = select(&|x| has(x, &s.ab) && has(x, &s.ad));
    let q = select(&|x| has(x, &s.ab) && has(x, &s.cb));
    let r = select(&|x| has(x, &s.ab) && has(x, &s.cd));
    let z = select(&|x| has(x, &s.ab) && has(x, &s.ad) && has(x, &s.cd));
    let z_prime = select(&|x| has(x, &s.ab) && has(x, &s.cb) && has(x, &s.cd));
    let p_prime = select(&|x| has(x, &s.ab) && has(x, &s.ad) && !has(x, &s.cd));
    let r_prime = select(&|x| has(x, &s.ab) && has(x, &s.cd) && !has(x, &s.ad));
    let r_double_prime = select(&|x| has(x, &s.ab) && has(x, &s.cd) && !has(x, &s.cb));
    let q_prime = select(&|x| has(x, &s.ab) && has(x, &s.cb) && !has(x, &s.cd));
    let p_parts = classify(&p_prime, p_class)?;
    let q_parts = classify(&q_prime, q_class)?;
    let r_parts = classify(&r_prime, r_class)?;
    let r_prime_parts = classify(&r_double_prime, r_class)?;
    Ok(BipartiteFamilies {
        graph: g,
        k,
        p,
        q,
        r,
        z,
        z_prime,
        p_prime,
        r_prime,
        r_double_prime,
        q_prime,
        p_parts,
        q_parts,
        r_parts,
        r_prime_parts,
    })
}

fn swap_a_c(v: Vertex) -> Vertex {
    let s = ANCHORS;
    if v == s.a {
        s.c
    } else if v == s.c {
        s.a
    } else {
        v
    }
}

/// Transpose `a` and `c`, then replace `cb` by `ab`.
fn transpose_and_swap<'g>(x: &Forest<'g>) -> std::result::Result<Forest<'g>, String> {
    let s = ANCHORS;
    let moved = x.relabel(swap_a_c).map_err(|e| e.to_string())?;
    swap_edge(&moved, &s.cb, &s.ab)
}

impl<'g> BipartiteFamilies<'g> {
    /// `f_i: P_i -> R_i` replaces `ad` by `cd`; `g_i` undoes it.
    pub fn pr123(&self, i: usize) -> Result<BijectionRecord> {
        if !(1..=3).contains(&i) {
            return Err(invalid!("class index {i} must be 1, 2 or 3"));
        }
        let s = ANCHORS;
        Ok(verify_pair(
            &format!("pr123 i={i}"),
            &self.p_parts[i - 1],
            &self.r_parts[i - 1],
            &|x| swap_edge(x, &s.ad, &s.cd),
            &|x| swap_edge(x, &s.cd, &s.ad),
        ))
    }

    /// `h: P_4 -> R_4` and `h': R_4 -> P_4`, both "transpose `a`, `c`, then
    /// replace `cb` by `ab`".
    pub fn pr4(&self) -> BijectionRecord {
        verify_pair("pr4", &self.p_parts[3], &self.r_parts[3], &transpose_and_swap, &transpose_and_swap)
    }

    /// `f': Q_2 -> R_5` replaces `cb` by `cd`; `g'` undoes it.
    pub fn q2r5(&self) -> BijectionRecord {
        let s = ANCHORS;
        verify_pair(
            "q2r5",
            &self.q_parts[1],
            &self.r_parts[4],
            &|x| swap_edge(x, &s.cb, &s.cd),
            &|x| swap_edge(x, &s.cd, &s.cb),
        )
    }

    pub fn all_records(&self) -> Vec<BijectionRecord> {
        let mut out: Vec<BijectionRecord> = (1..=3).map(|i| self.pr123(i).expect("valid index")).collect();
        out.push(self.pr4());
        out.push(self.q2r5());
        out
    }

    /// Every stated decomposition and intersection, plus agreement with the
    /// pair counts.
    pub fn verify(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let mut with = |name: &str, whole: &[Forest<'g>], head: &[Forest<'g>], parts: &[Vec<Forest<'g>>]| {
            let mut all = vec![head];
            all.extend(parts.iter().map(Vec::as_slice));
            checks.push(partition_check(name, whole, &all));
        };
        with("P = Z + P_1..P_4", &self.p, &self.z, &self.p_parts);
        with("R = Z + R_1..R_5", &self.r, &self.z, &self.r_parts);
        with("Q = Z' + Q_1..Q_4", &self.q, &self.z_prime, &self.q_parts);
        with("R = Z' + R'_1..R'_5", &self.r, &self.z_prime, &self.r_prime_parts);
        checks.push(partition_check("P = Z + P'", &self.p, &[&self.z, &self.p_prime]));
        checks.push(partition_check("R = Z + R'", &self.r, &[&self.z, &self.r_prime]));
        checks.push(partition_check("Q = Z' + Q'", &self.q, &[&self.z_prime, &self.q_prime]));
        checks.push(partition_check("R = Z' + R''", &self.r, &[&self.z_prime, &self.r_double_prime]));
        checks.push(intersection_check("Z = P ∩ R", &self.z, &self.p, &self.r));
        checks.push(intersection_check("Z' = Q ∩ R", &self.z_prime, &self.q, &self.r));
        if let PairCounts::Bipartite { p, q, r } = pair_counts(self.graph, self.k)? {
            for (name, fam, count) in [("#P = p", &self.p, p), ("#Q = q", &self.q, q), ("#R = r", &self.r, r)] {
                checks.push(check(name, BigUint::from(fam.len()) == count, format!("{} vs {count}", fam.len())));
            }
        }
        Ok(checks)
    }
}

/// All families for `g` at component count `k`.
#[derive(Debug, Clone)]
pub enum ForestFamilies<'g> {
    Complete(CompleteFamilies<'g>),
    Bipartite(Box<BipartiteFamilies<'g>>),
}

impl ForestFamilies<'_> {
    pub fn verify(&self) -> Result<Vec<Check>> {
        match self {
            ForestFamilies::Complete(f) => f.verify(),
            ForestFamilies::Bipartite(f) => f.verify(),
        }
    }

    pub fn records(&self) -> Vec<BijectionRecord> {
        match self {
            ForestFamilies::Complete(f) => f.forestbij_records(),
            ForestFamilies::Bipartite(f) => f.all_records(),
        }
    }
}

/// Anchor vertices present and `1 <= k <= |V| - 2`, so that the families
/// can be nonempty. This admits the boundary `k = |V| - 2` on top of the
/// theorem range.
fn check_family_range(g: &Graph, k: usize) -> Result<()> {
    let (ok, need) = match g.kind() {
        GraphKind::Complete { n } => (n >= 4 && complete_size(g).is_ok(), "n >= 4"),
        GraphKind::CompleteBipartite { m, n } => (m >= 2 && n >= 2, "m, n >= 2"),
    };
    if !ok {
        return Err(invalid!("forest families on {g} need {need}"));
    }
    let v = g.vertex_count();
    if k == 0 || k + 2 > v {
        return Err(invalid!("forest families need 0 < k <= {}, got k = {k}", v - 2));
    }
    Ok(())
}

/// Materialize the families by filtered enumeration.
pub fn build_families(g: &Graph, k: usize) -> Result<ForestFamilies<'_>> {
    check_family_range(g, k)?;
    match g.kind() {
        GraphKind::Complete { n } => {
            let all = enumerate_forests(g, k)?;
            let through = |e: Edge, f: Edge| -> Vec<Forest<'_>> {
                all.iter().filter(|x| x.contains(&e) && x.contains(&f)).copied().collect()
            };
            let p = through(Edge::between(1, 2), Edge::between(2, 3));
            let r = through(Edge::between(1, 2), Edge::between(3, 4));
            let anchored = crate::forest::anchored_subsets(n)
                .par_iter()
                .map(|w| anchored_families(g, w))
                .collect::<Result<Vec<_>>>()?;
            Ok(ForestFamilies::Complete(CompleteFamilies { graph: g, k, p, r, anchored }))
        }
        GraphKind::CompleteBipartite { .. } => Ok(ForestFamilies::Bipartite(Box::new(bipartite_families(g, k)?))),
    }
}

fn bipartite_only(g: &Graph, k: usize) -> Result<BipartiteFamilies<'_>> {
    if !matches!(g.kind(), GraphKind::CompleteBipartite { .. }) {
        return Err(invalid!("{g} is not a complete bipartite graph"));
    }
    check_family_range(g, k)?;
    bipartite_families(g, k)
}

pub fn bijections_pr123(g: &Graph, k: usize, i: usize) -> Result<BijectionRecord> {
    bipartite_only(g, k)?.pr123(i)
}

pub fn bijection_pr4(g: &Graph, k: usize) -> Result<BijectionRecord> {
    Ok(bipartite_only(g, k)?.pr4())
}

pub fn bijection_q2r5(g: &Graph, k: usize) -> Result<BijectionRecord> {
    Ok(bipartite_only(g, k)?.q2r5())
}

/// The inequalities `p < r`, `q < r`, `r < p + q` with their exact margins.
///
/// The bijections give `r - p = #R_5`, `r - q = #R'_1` and
/// `p + q - r = #Z' + #Q_1 + #Q_3 + #Q_4`. `R_5` needs a path `b - x - d`
/// avoiding `a, c`, so it is nonempty exactly when `m >= 3` and forests have
/// at least four edges; symmetrically for `R'_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub p: BigUint,
    pub q: BigUint,
    pub r: BigUint,
    pub r_minus_p: BigInt,
    pub r_minus_q: BigInt,
    pub p_plus_q_minus_r: BigInt,
    /// Whether `p < r` (resp. `q < r`) is expected to be strict here.
    pub strict_p_expected: bool,
    pub strict_q_expected: bool,
    /// The three margin identities against the family sizes.
    pub identities_hold: bool,
}

impl InequalityReport {
    pub fn p_lt_r(&self) -> bool {
        self.r_minus_p > BigInt::zero()
    }

    pub fn q_lt_r(&self) -> bool {
        self.r_minus_q > BigInt::zero()
    }

    pub fn r_lt_p_plus_q(&self) -> bool {
        self.p_plus_q_minus_r > BigInt::zero()
    }

    /// True at boundary sizes where `p = r` or `q = r`.
    pub fn is_boundary(&self) -> bool {
        !self.strict_p_expected || !self.strict_q_expected
    }

    /// Strict inequalities where expected, equality at the boundary, the
    /// third inequality always, and the identities.
    pub fn holds(&self) -> bool {
        let zero = BigInt::zero();
        let side = |strict: bool, margin: &BigInt| if strict { *margin > zero } else { *margin == zero };
        self.identities_hold
            && side(self.strict_p_expected, &self.r_minus_p)
            && side(self.strict_q_expected, &self.r_minus_q)
            && self.r_lt_p_plus_q()
            && self.r_minus_p >= zero
            && self.r_minus_q >= zero
    }
}

pub fn verify_count_inequalities(fam: &ForestFamilies<'_>) -> Result<InequalityReport> {
    let ForestFamilies::Bipartite(f) = fam else {
        return Err(invalid!("the p, q, r inequalities concern complete bipartite graphs"));
    };
    let (m, n) = match f.graph.kind() {
        GraphKind::CompleteBipartite { m, n } => (m, n),
        GraphKind::Complete { .. } => unreachable!(),
    };
    let big = |x: usize| BigInt::from(x);
    let (p, q, r) = (f.p.len(), f.q.len(), f.r.len());
    let r_minus_p = big(r) - big(p);
    let r_minus_q = big(r) - big(q);
    let p_plus_q_minus_r = big(p) + big(q) - big(r);
    let identities_hold = r_minus_p == big(f.r_parts[4].len())
        && r_minus_q == big(f.r_prime_parts[0].len())
        && p_plus_q_minus_r
            == big(f.z_prime.len() + f.q_parts[0].len() + f.q_parts[2].len() + f.q_parts[3].len());
    let edges = m + n - f.k;
    Ok(InequalityReport {
        p: p.into(),
        q: q.into(),
        r: r.into(),
        r_minus_p,
        r_minus_q,
        p_plus_q_minus_r,
        strict_p_expected: m >= 3 && edges >= 4,
        strict_q_expected: n >= 3 && edges >= 4,
        identities_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite_graph, complete_graph};

    fn sizes<const N: usize>(parts: &[Vec<Forest<'_>>; N]) -> [usize; N] {
        std::array::from_fn(|i| parts[i].len())
    }

    #[test]
    fn k22_families() {
        let g = complete_bipartite_graph(2, 2).unwrap();
        let ForestFamilies::Bipartite(f) = build_families(&g, 1).unwrap() else { panic!() };
        assert_eq!((f.p.len(), f.q.len(), f.r.len(), f.z.len()), (2, 2, 2, 1));
        assert!(f.verify().unwrap().iter().all(|c| c.passed));
        for rec in f.all_records() {
            assert!(rec.is_verified(), "{rec}");
        }
    }

    #[test]
    fn k4_families() {
        let g = complete_graph(4).unwrap();
        let ForestFamilies::Complete(f) = build_families(&g, 2).unwrap() else { panic!() };
        assert_eq!((f.p.len(), f.r.len()), (1, 1));
        assert!(f.verify().unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn r_classes_are_complete() {
        let g = complete_bipartite_graph(3, 3).unwrap();
        let ForestFamilies::Bipartite(f) = build_families(&g, 1).unwrap() else { panic!() };
        // Removing two edges of a spanning tree leaves three pieces, so c and
        // d cannot both avoid the pieces of a and b.
        assert_eq!(sizes(&f.r_parts), [3, 9, 0, 1, 3]);
        assert_eq!(sizes(&f.p_parts)[..4], sizes(&f.r_parts)[..4]);
        assert_eq!(sizes(&f.q_parts)[1], sizes(&f.r_parts)[4]);
    }

    #[test]
    fn forestbij_small() {
        for w in [vec![1, 2, 3, 4], vec![1, 2, 3, 4, 5]] {
            let rec = bijection_forestbij(&w).unwrap();
            assert!(rec.is_verified(), "{rec}");
            assert!(rec.domain_size > 0);
        }
        assert!(bijection_forestbij(&[1, 2, 3]).is_err());
    }

    #[test]
    fn forward_map_uses_34_not_23() {
        let g = Graph::complete_on(&[1, 2, 3, 4, 5]).unwrap();
        let fam = anchored_families(&g, &[1, 2, 3, 4, 5]).unwrap();
        for x in &fam.split_adjacent {
            let y = forestbij_forward(x).unwrap();
            assert!(y.contains(&Edge::between(3, 4)) && !y.contains(&Edge::between(2, 3)));
        }
    }

    #[test]
    fn broken_map_is_reported() {
        let g = complete_bipartite_graph(3, 3).unwrap();
        let ForestFamilies::Bipartite(f) = build_families(&g, 1).unwrap() else { panic!() };
        let s = ANCHORS;
        // Adding cb instead of cd lands outside R_1.
        let rec = verify_pair(
            "wrong",
            &f.p_parts[0],
            &f.r_parts[0],
            &|x| swap_edge(x, &s.ad, &s.cb),
            &|x| swap_edge(x, &s.cd, &s.ad),
        );
        assert!(!rec.is_verified());
        assert!(rec.failures.iter().any(|x| x.stage == Stage::ForwardImage || x.stage == Stage::Forward));
    }

    #[test]
    fn inequality_reports() {
        let k22 = complete_bipartite_graph(2, 2).unwrap();
        let rep = verify_count_inequalities(&build_families(&k22, 1).unwrap()).unwrap();
        assert!(!rep.p_lt_r() && rep.is_boundary() && rep.holds());
        let k23 = complete_bipartite_graph(2, 3).unwrap();
        let rep = verify_count_inequalities(&build_families(&k23, 1).unwrap()).unwrap();
        assert!(rep.q_lt_r() && rep.r_lt_p_plus_q() && rep.holds());
        let k33 = complete_bipartite_graph(3, 3).unwrap();
        let rep = verify_count_inequalities(&build_families(&k33, 2).unwrap()).unwrap();
        assert!(rep.p_lt_r() && rep.q_lt_r() && rep.r_lt_p_plus_q() && rep.holds());
    }

    #[test]
    fn range_errors() {
        let g = complete_bipartite_graph(2, 2).unwrap();
        assert!(build_families(&g, 2).is_ok());
        assert!(matches!(build_families(&g, 3), Err(Error::InvalidInput(_))));
        assert!(matches!(build_families(&complete_graph(3).unwrap(), 1), Err(Error::InvalidInput(_))));
        assert!(bijections_pr123(&g, 1, 4).is_err());
        assert!(bijection_pr4(&complete_graph(5).unwrap(), 1).is_err());
    }
}
