//! Matroids given by an explicit basis list: graphic matroids, truncation,
//! the exchange axiom, and basis generating polynomials.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::forest::{canonical_cmp, enumerate_forests};
use crate::graph::Graph;
use crate::poly::Polynomial;

/// Ground set names plus bases as bitmasks over the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    ground: Vec<String>,
    bases: Vec<u64>,
}

/// Variable names `x[u,v]` for the edges of `g`, in canonical edge order.
pub fn edge_variables(g: &Graph) -> Arc<[String]> {
    g.edges().iter().map(|e| format!("x[{},{}]", e.lo(), e.hi())).collect::<Vec<_>>().into()
}

/// The generating function of `k`-component spanning forests of `g`.
pub fn forest_generating_function(g: &Graph, k: usize) -> Result<Polynomial> {
    let forests = enumerate_forests(g, k)?;
    Ok(Polynomial::square_free_sum(
        edge_variables(g),
        forests.iter().map(|f| bits(f.mask()).collect()),
    ))
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask & (1 << i) != 0)
}

impl Matroid {
    /// Build from explicit bases. Only shape checks are made here; use
    /// [`verify_exchange_axiom`] to test the matroid axioms.
    pub fn new(ground: Vec<String>, bases: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if ground.len() > 64 {
            return Err(invalid!("ground sets are limited to 64 elements, got {}", ground.len()));
        }
        let mut masks = BTreeSet::new();
        for b in bases {
            let mut m = 0u64;
            for i in b {
                if i >= ground.len() {
                    return Err(invalid!("basis element {i} outside a ground set of {}", ground.len()));
                }
                m |= 1 << i;
            }
            masks.insert(m);
        }
        let mut bases: Vec<u64> = masks.into_iter().collect();
        bases.sort_by(|a, b| canonical_cmp(*a, *b));
        Ok(Matroid { ground, bases })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    pub fn basis_elements(&self, basis: u64) -> Vec<usize> {
        bits(basis).collect()
    }

    /// Size of the first basis (all bases have this size in a matroid).
    pub fn rank(&self) -> usize {
        self.bases.first().map_or(0, |b| b.count_ones() as usize)
    }
}

/// The graphic matroid: ground set the edges of `g`, bases its spanning trees.
pub fn graphic_matroid(g: &Graph) -> Result<Matroid> {
    let trees = enumerate_forests(g, 1)?;
    if trees.is_empty() {
        return Err(invalid!("{g} is not connected"));
    }
    let ground = g.edges().iter().map(|e| e.to_string()).collect();
    Matroid::new(ground, trees.iter().map(|t| bits(t.mask()).collect()))
}

/// The rank-`r` truncation: every `r`-subset of some basis.
pub fn truncate(m: &Matroid, r: usize) -> Result<Matroid> {
    if r == 0 || r > m.rank() {
        return Err(invalid!("truncation rank {r} must satisfy 1 <= r <= {}", m.rank()));
    }
    let subsets: HashSet<u64> = m
        .bases
        .par_iter()
        .flat_map_iter(|&b| subsets_of_size(b, r))
        .collect();
    Matroid::new(m.ground.clone(), subsets.into_iter().map(|s| bits(s).collect()))
}

fn subsets_of_size(mask: u64, r: usize) -> Vec<u64> {
    let elems: Vec<usize> = bits(mask).collect();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(r);
    fn go(elems: &[usize], start: usize, r: usize, pick: &mut Vec<usize>, out: &mut Vec<u64>) {
        if pick.len() == r {
            out.push(pick.iter().fold(0u64, |m, &i| m | (1 << i)));
            return;
        }
        for i in start..elems.len() {
            if elems.len() - i < r - pick.len() {
                break;
            }
            pick.push(elems[i]);
            go(elems, i + 1, r, pick, out);
            pick.pop();
        }
    }
    go(&elems, 0, r, &mut pick, &mut out);
    out
}

/// Exhaustive check of the basis axioms: a nonempty basis family of equal
/// sizes in which for all `B1, B2` and `x ∈ B1 \ B2` some `y ∈ B2 \ B1` makes
/// `B1 - x + y` a basis.
pub fn verify_exchange_axiom(m: &Matroid) -> bool {
    let Some(&first) = m.bases.first() else {
        return false;
    };
    let size = first.count_ones();
    if m.bases.iter().any(|b| b.count_ones() != size) {
        return false;
    }
    let all: HashSet<u64> = m.bases.iter().copied().collect();
    let ground = m.ground.len();
    m.bases.par_iter().all(|&b1| {
        // For each x in B1, the set of y outside B1 with B1 - x + y a basis.
        let exchanges: Vec<(usize, u64)> = bits(b1)
            .map(|x| {
                let without = b1 & !(1 << x);
                let ys = (0..ground)
                    .filter(|y| b1 & (1 << y) == 0 && all.contains(&(without | (1 << y))))
                    .fold(0u64, |acc, y| acc | (1 << y));
                (x, ys)
            })
            .collect();
        m.bases.iter().all(|&b2| {
            let fresh = b2 & !b1;
            exchanges
                .iter()
                .all(|&(x, ys)| b2 & (1 << x) != 0 || ys & fresh != 0)
        })
    })
}

/// `Φ_M = Σ_B Π_{b ∈ B} x_b`, with variables `x[...]` over the ground set.
pub fn basis_generating_polynomial(m: &Matroid) -> Polynomial {
    let vars: Arc<[String]> = m
        .ground
        .iter()
        .map(|name| match name.split_once('-') {
            Some((a, b)) => format!("x[{a},{b}]"),
            None => format!("x[{name}]"),
        })
        .collect::<Vec<_>>()
        .into();
    Polynomial::square_free_sum(vars, m.bases.iter().map(|&b| bits(b).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite_graph, complete_graph};

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    #[test]
    fn graphic_examples() {
        let k4 = graphic_matroid(&complete_graph(4).unwrap()).unwrap();
        assert_eq!((k4.bases().len(), k4.rank()), (16, 3));
        let k22 = graphic_matroid(&complete_bipartite_graph(2, 2).unwrap()).unwrap();
        assert_eq!((k22.bases().len(), k22.rank()), (4, 3));
        let k2 = graphic_matroid(&complete_graph(2).unwrap()).unwrap();
        assert_eq!(k2.bases(), &[1]);
    }

    #[test]
    fn truncation() {
        let k4 = graphic_matroid(&complete_graph(4).unwrap()).unwrap();
        assert_eq!(truncate(&k4, 2).unwrap().bases().len(), 15);
        assert_eq!(truncate(&k4, 3).unwrap(), k4);
        assert!(truncate(&k4, 0).is_err());
        assert!(truncate(&k4, 4).is_err());
    }

    #[test]
    fn exchange_axiom_small() {
        assert!(verify_exchange_axiom(&Matroid::new(names(2), [vec![0], vec![1]]).unwrap()));
        assert!(!verify_exchange_axiom(&Matroid::new(names(2), [vec![0], vec![0, 1]]).unwrap()));
        assert!(!verify_exchange_axiom(&Matroid::new(names(2), Vec::<Vec<usize>>::new()).unwrap()));
        // {a,b}, {c,d} violates exchange: dropping a needs c or d with b
        assert!(!verify_exchange_axiom(&Matroid::new(names(4), [vec![0, 1], vec![2, 3]]).unwrap()));
        let k4 = graphic_matroid(&complete_graph(4).unwrap()).unwrap();
        assert!(verify_exchange_axiom(&k4));
        let k5 = graphic_matroid(&complete_graph(5).unwrap()).unwrap();
        assert!(verify_exchange_axiom(&truncate(&k5, 3).unwrap()));
    }

    #[test]
    fn generating_polynomials() {
        let k4 = graphic_matroid(&complete_graph(4).unwrap()).unwrap();
        let linear = basis_generating_polynomial(&truncate(&k4, 1).unwrap());
        assert_eq!(
            linear.to_string(),
            "x[1,2] + x[1,3] + x[1,4] + x[2,3] + x[2,4] + x[3,4]"
        );
        let single = Matroid::new(names(2), [vec![0, 1]]).unwrap();
        assert_eq!(basis_generating_polynomial(&single).to_string(), "x[a]*x[b]");
        let g = complete_bipartite_graph(2, 2).unwrap();
        let phi = basis_generating_polynomial(&graphic_matroid(&g).unwrap());
        assert_eq!(phi, forest_generating_function(&g, 1).unwrap());
        assert_eq!(phi.len(), 4);
        assert_eq!(phi.homogeneous_degree(), Some(3));
    }
}
