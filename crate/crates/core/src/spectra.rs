//! All-ones Hessians of forest generating functions, their structured
//! parameters, closed-form spectra and exact spectrum certification.
//!
//! No eigensolver is involved. A claimed spectrum `{λ_i : m_i}` of a
//! symmetric matrix `H` is certified by two exact checks:
//!
//! * `Π_i (H - λ_i I) = 0`, so every eigenvalue of `H` is among the `λ_i`;
//! * `tr(H^j) = Σ_i m_i λ_i^j` for `j = 0..=d` (`d` distinct values), which
//!   pins the multiplicities through an invertible Vandermonde system.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::forest::{check_theorem_range, count_masks, Decomposition, PairCounts};
use crate::graph::{classify_edge_pair, Graph, GraphKind, PairClass};
use crate::linalg::ExactMatrix;
use crate::matroid::forest_generating_function;
use crate::poly::all_ones;

/// The all-ones Hessian built by differentiating the generating function.
pub fn tilde_hessian_by_differentiation(g: &Graph, k: usize) -> Result<ExactMatrix> {
    let phi = forest_generating_function(g, k)?;
    phi.hessian_matrix(&all_ones(g.edge_count()))
}

/// The all-ones Hessian built entry by entry from constrained forest counts:
/// entry `(e, e')` is the number of `k`-component forests through both edges.
pub fn tilde_hessian_by_counting(g: &Graph, k: usize) -> Result<ExactMatrix> {
    if k == 0 || k > g.vertex_count() {
        return Err(invalid!("component count k = {k} must satisfy 1 <= k <= {}", g.vertex_count()));
    }
    let n = g.edge_count();
    let upper: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| count_masks(g, k, (1 << i) | (1 << j), 0, &|_| true))
                .collect()
        })
        .collect();
    Ok(ExactMatrix::from_fn(n, n, |i, j| {
        let c = match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => upper[i][j - i - 1],
            std::cmp::Ordering::Greater => upper[j][i - j - 1],
        };
        BigRational::from_integer(c.into())
    }))
}

/// The all-ones Hessian `H̃` of the `k`-component forest generating function,
/// cross-checked between differentiation and counting.
pub fn tilde_hessian(g: &Graph, k: usize) -> Result<ExactMatrix> {
    let by_diff = tilde_hessian_by_differentiation(g, k)?;
    let by_count = tilde_hessian_by_counting(g, k)?;
    if by_diff != by_count {
        return Err(Error::StructureViolation(format!(
            "differentiated and counted Hessians of {g}, k = {k} disagree"
        )));
    }
    Ok(by_diff)
}

/// Parameters of a matrix that is constant on each [`PairClass`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuredParams {
    Complete { alpha: BigRational, beta: BigRational, gamma: BigRational, n: usize },
    Bipartite { alpha: BigRational, beta: BigRational, gamma: BigRational, delta: BigRational, m: usize, n: usize },
}

/// Read off the per-class values of `mat` and check every entry against them.
pub fn structured_params(mat: &ExactMatrix, g: &Graph) -> Result<StructuredParams> {
    let n_edges = g.edge_count();
    if mat.rows() != n_edges || mat.cols() != n_edges {
        return Err(invalid!(
            "matrix is {}x{} but {g} has {n_edges} edges",
            mat.rows(),
            mat.cols()
        ));
    }
    let classes = [
        PairClass::Equal,
        PairClass::ShareVertex,
        PairClass::ShareLeft,
        PairClass::ShareRight,
        PairClass::Disjoint,
    ];
    let mut values: [Option<BigRational>; 5] = Default::default();
    let edges = g.edges();
    for (i, e) in edges.iter().enumerate() {
        for (j, f) in edges.iter().enumerate() {
            let class = classify_edge_pair(g, e, f)?;
            let slot = classes.iter().position(|c| *c == class).expect("known class");
            let entry = mat.get(i, j);
            match &values[slot] {
                None => values[slot] = Some(entry.clone()),
                Some(v) if v == entry => {}
                Some(v) => {
                    return Err(Error::StructureViolation(format!(
                        "entry ({e}, {f}) = {entry} differs from {v} seen for class {class:?}"
                    )))
                }
            }
        }
    }
    let get = |slot: usize| values[slot].clone().unwrap_or_else(BigRational::zero);
    Ok(match g.kind() {
        GraphKind::Complete { n } => StructuredParams::Complete { alpha: get(0), beta: get(1), gamma: get(4), n },
        GraphKind::CompleteBipartite { m, n } => StructuredParams::Bipartite {
            alpha: get(0),
            beta: get(2),
            gamma: get(3),
            delta: get(4),
            m,
            n,
        },
    })
}

/// Eigenvalues with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pairs: Vec<(BigRational, usize)>,
}

impl Spectrum {
    /// Build from `(value, multiplicity)` pairs, merging repeated values
    /// (kept at their first position) and dropping zero multiplicities.
    pub fn new(pairs: impl IntoIterator<Item = (BigRational, usize)>) -> Self {
        let mut merged: Vec<(BigRational, usize)> = Vec::new();
        for (value, mult) in pairs {
            if mult == 0 {
                continue;
            }
            match merged.iter_mut().find(|(v, _)| *v == value) {
                Some((_, m)) => *m += mult,
                None => merged.push((value, mult)),
            }
        }
        Spectrum { pairs: merged }
    }

    pub fn pairs(&self) -> &[(BigRational, usize)] {
        &self.pairs
    }

    pub fn dimension(&self) -> usize {
        self.pairs.iter().map(|(_, m)| m).sum()
    }

    /// `Π λ_i^{m_i}`.
    pub fn determinant(&self) -> BigRational {
        self.pairs
            .iter()
            .map(|(v, m)| num_traits::pow(v.clone(), *m))
            .fold(BigRational::one(), |a, b| a * b)
    }

    /// Power sum `Σ m_i λ_i^j`.
    pub fn moment(&self, j: usize) -> BigRational {
        self.pairs
            .iter()
            .map(|(v, m)| num_traits::pow(v.clone(), j) * BigRational::from_integer((*m).into()))
            .sum()
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(v, m)| format!("{v}:{m}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Closed-form spectrum of a class-structured matrix on `K_n` (three
/// eigenvalues) or `K_{m,n}` (four eigenvalues), in that order.
pub fn closed_form_spectrum(params: &StructuredParams) -> Result<Spectrum> {
    match params {
        StructuredParams::Complete { alpha, beta, gamma, n } => {
            let n = *n;
            if n < 3 {
                return Err(invalid!("closed-form spectrum on K_n needs n >= 3, got {n}"));
            }
            let top = alpha + int(2 * n - 4) * beta + int((n - 2) * (n - 3) / 2) * gamma;
            let middle = alpha - int(2) * beta + gamma;
            // α + (n-4)β - (n-3)γ, with n - 4 possibly negative
            let last = alpha + (int(n) - int(4)) * beta - int(n - 3) * gamma;
            Ok(Spectrum::new([(top, 1), (middle, n * (n - 1) / 2 - n), (last, n - 1)]))
        }
        StructuredParams::Bipartite { alpha, beta, gamma, delta, m, n } => {
            let (m, n) = (*m, *n);
            if m < 2 || n < 2 {
                return Err(invalid!("closed-form spectrum on K_{{m,n}} needs m, n >= 2, got ({m}, {n})"));
            }
            let (m1, n1) = (int(m - 1), int(n - 1));
            let first = alpha + &n1 * beta + &m1 * gamma + &m1 * &n1 * delta;
            let second = alpha + &n1 * beta - gamma - &n1 * delta;
            let third = alpha - beta + &m1 * gamma - &m1 * delta;
            let fourth = alpha - beta - gamma + delta;
            Ok(Spectrum::new([
                (first, 1),
                (second, m - 1),
                (third, n - 1),
                (fourth, (m - 1) * (n - 1)),
            ]))
        }
    }
}

/// Outcome of the exact spectrum certification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumCertificate {
    pub symmetric: bool,
    /// `Π (H - λ_i I)` is the zero matrix.
    pub annihilated: bool,
    /// `(j, tr(H^j), Σ m_i λ_i^j)` for `j = 0..=d`.
    pub moments: Vec<(usize, BigRational, BigRational)>,
}

impl SpectrumCertificate {
    pub fn is_certified(&self) -> bool {
        self.symmetric && self.annihilated && self.moments.iter().all(|(_, a, b)| a == b)
    }
}

pub fn certify_spectrum(mat: &ExactMatrix, spectrum: &Spectrum) -> Result<SpectrumCertificate> {
    if !mat.is_square() || spectrum.dimension() != mat.rows() {
        return Err(invalid!(
            "spectrum accounts for {} eigenvalues but the matrix is {}x{}",
            spectrum.dimension(),
            mat.rows(),
            mat.cols()
        ));
    }
    let mut product = ExactMatrix::identity(mat.rows());
    for (lambda, _) in spectrum.pairs() {
        product = product.mul(&mat.shift(lambda)?)?;
    }
    let mut moments = Vec::new();
    let mut power = ExactMatrix::identity(mat.rows());
    for j in 0..=spectrum.pairs().len() {
        if j > 0 {
            power = power.mul(mat)?;
        }
        moments.push((j, power.trace(), spectrum.moment(j)));
    }
    Ok(SpectrumCertificate { symmetric: mat.is_symmetric(), annihilated: product.is_zero(), moments })
}

/// True iff `spectrum` is exactly the spectrum of the symmetric matrix `mat`.
pub fn verify_spectrum(mat: &ExactMatrix, spectrum: &Spectrum) -> Result<bool> {
    Ok(certify_spectrum(mat, spectrum)?.is_certified())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignProfile {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

/// Eigenvalue sign counts, weighted by multiplicity.
pub fn sign_profile(spectrum: &Spectrum) -> SignProfile {
    let mut s = SignProfile { positive: 0, zero: 0, negative: 0 };
    for (v, m) in spectrum.pairs() {
        if v.is_positive() {
            s.positive += m;
        } else if v.is_zero() {
            s.zero += m;
        } else {
            s.negative += m;
        }
    }
    s
}

pub fn exact_determinant(mat: &ExactMatrix) -> Result<BigRational> {
    mat.determinant()
}

/// Sign identities behind the nonvanishing of the non-top eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignPrediction {
    Complete {
        /// `-2p + q`
        middle: BigInt,
        /// `(n-4)p - (n-3)q`
        last: BigInt,
        /// `(-2t - f, -nt - f)` when a decomposition was supplied.
        via_decomposition: Option<(BigInt, BigInt)>,
    },
    Bipartite {
        p_minus_r: BigInt,
        q_minus_r: BigInt,
        /// `-p - q + r`
        r_minus_p_minus_q: BigInt,
        /// `(n-1)p - q - (n-1)r`
        second: BigInt,
        /// `-p + (m-1)q - (m-1)r`
        third: BigInt,
        /// `second = (p-r)n + (-p-q+r)` and `third = (q-r)m + (-p-q+r)`.
        identities_hold: bool,
    },
}

impl SignPrediction {
    /// Whether every non-top eigenvalue is predicted negative (and, in the
    /// complete case, the decomposition route agrees).
    pub fn all_negative(&self) -> bool {
        match self {
            SignPrediction::Complete { middle, last, via_decomposition } => {
                middle.is_negative()
                    && last.is_negative()
                    && via_decomposition.as_ref().is_none_or(|(a, b)| a == middle && b == last)
            }
            SignPrediction::Bipartite { r_minus_p_minus_q, second, third, identities_hold, .. } => {
                *identities_hold && r_minus_p_minus_q.is_negative() && second.is_negative() && third.is_negative()
            }
        }
    }
}

fn signed(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// Evaluate the sign quantities for `g` from its pair counts.
pub fn predicted_signs(
    g: &Graph,
    k: usize,
    counts: &PairCounts,
    decomposition: Option<&Decomposition>,
) -> Result<SignPrediction> {
    check_theorem_range(g, k)?;
    match (g.kind(), counts) {
        (GraphKind::Complete { n }, PairCounts::Complete { p, q }) => {
            let (p, q) = (signed(p), signed(q));
            let n_big = BigInt::from(n);
            let middle = -BigInt::from(2) * &p + &q;
            let last = (&n_big - 4) * &p - (&n_big - 3) * &q;
            let via_decomposition = decomposition.map(|d| {
                let (t, f) = (signed(&d.t), signed(&d.f));
                (-BigInt::from(2) * &t - &f, -&n_big * &t - &f)
            });
            Ok(SignPrediction::Complete { middle, last, via_decomposition })
        }
        (GraphKind::CompleteBipartite { m, n }, PairCounts::Bipartite { p, q, r }) => {
            let (p, q, r) = (signed(p), signed(q), signed(r));
            let (m, n) = (BigInt::from(m), BigInt::from(n));
            let base = -&p - &q + &r;
            let second = (&n - 1) * &p - &q - (&n - 1) * &r;
            let third = -&p + (&m - 1) * &q - (&m - 1) * &r;
            let identities_hold = second == (&p - &r) * &n + &base && third == (&q - &r) * &m + &base;
            Ok(SignPrediction::Bipartite {
                p_minus_r: &p - &r,
                q_minus_r: &q - &r,
                r_minus_p_minus_q: base,
                second,
                third,
                identities_hold,
            })
        }
        _ => Err(invalid!("pair counts do not match the kind of {g}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{edge_pair_counts, pq_decomposition};
    use crate::graph::{complete_bipartite_graph, complete_graph};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn spec(pairs: &[(i64, usize)]) -> Spectrum {
        Spectrum::new(pairs.iter().map(|(v, m)| (q(*v), *m)))
    }

    #[test]
    fn k4_examples() {
        let g = complete_graph(4).unwrap();
        let h2 = tilde_hessian(&g, 2).unwrap();
        assert_eq!(h2, ExactMatrix::from_fn(6, 6, |i, j| q(i64::from(i != j))));
        let h1 = tilde_hessian(&g, 1).unwrap();
        let params = structured_params(&h1, &g).unwrap();
        assert_eq!(params, StructuredParams::Complete { alpha: q(0), beta: q(3), gamma: q(4), n: 4 });
        let s1 = closed_form_spectrum(&params).unwrap();
        assert_eq!(s1, spec(&[(16, 1), (-2, 2), (-4, 3)]));
        assert!(verify_spectrum(&h1, &s1).unwrap());
        let s2 = closed_form_spectrum(&structured_params(&h2, &g).unwrap()).unwrap();
        assert_eq!(s2, spec(&[(5, 1), (-1, 5)]));
        assert!(verify_spectrum(&h2, &s2).unwrap());
        assert!(!verify_spectrum(&h2, &spec(&[(5, 1), (-1, 4), (0, 1)])).unwrap());
        assert!(verify_spectrum(&h2, &spec(&[(5, 1), (-1, 4)])).is_err());
        assert_eq!(exact_determinant(&h2).unwrap(), q(-5));
        assert_eq!(exact_determinant(&h1).unwrap(), q(-4096));
        assert_eq!(s1.determinant(), q(-4096));
        assert_eq!(sign_profile(&s1), SignProfile { positive: 1, zero: 0, negative: 5 });
    }

    #[test]
    fn k22_examples() {
        let g = complete_bipartite_graph(2, 2).unwrap();
        let h1 = tilde_hessian(&g, 1).unwrap();
        let params = structured_params(&h1, &g).unwrap();
        assert_eq!(
            params,
            StructuredParams::Bipartite { alpha: q(0), beta: q(2), gamma: q(2), delta: q(2), m: 2, n: 2 }
        );
        let s = closed_form_spectrum(&params).unwrap();
        assert_eq!(s, spec(&[(6, 1), (-2, 3)]));
        assert!(verify_spectrum(&h1, &s).unwrap());
        assert_eq!(sign_profile(&s), SignProfile { positive: 1, zero: 0, negative: 3 });
        let h2 = tilde_hessian(&g, 2).unwrap();
        let s2 = closed_form_spectrum(&structured_params(&h2, &g).unwrap()).unwrap();
        assert_eq!(s2, spec(&[(3, 1), (-1, 3)]));
    }

    #[test]
    fn linear_generating_function_gives_zero_matrix() {
        for g in [complete_graph(5).unwrap(), complete_bipartite_graph(2, 3).unwrap()] {
            let k = g.vertex_count() - 1;
            let h = tilde_hessian(&g, k).unwrap();
            assert!(h.is_zero());
            let s = closed_form_spectrum(&structured_params(&h, &g).unwrap()).unwrap();
            assert_eq!(s.pairs(), &[(q(0), g.edge_count())]);
            assert!(verify_spectrum(&h, &s).unwrap());
        }
    }

    #[test]
    fn identity_params_and_violations() {
        let g = complete_graph(4).unwrap();
        let id = ExactMatrix::identity(6);
        assert_eq!(
            structured_params(&id, &g).unwrap(),
            StructuredParams::Complete { alpha: q(1), beta: q(0), gamma: q(0), n: 4 }
        );
        let mut broken = id.clone();
        broken.set(0, 1, q(1));
        assert!(matches!(structured_params(&broken, &g), Err(Error::StructureViolation(_))));
        assert!(structured_params(&ExactMatrix::identity(5), &g).is_err());
        let small = StructuredParams::Complete { alpha: q(0), beta: q(1), gamma: q(1), n: 2 };
        assert!(closed_form_spectrum(&small).is_err());
    }

    #[test]
    fn sign_profile_of_zero_spectrum() {
        assert_eq!(sign_profile(&spec(&[(0, 4)])), SignProfile { positive: 0, zero: 4, negative: 0 });
        assert_eq!(sign_profile(&spec(&[(6, 1), (-2, 3)])), SignProfile { positive: 1, zero: 0, negative: 3 });
    }

    #[test]
    fn predicted_sign_examples() {
        let k4 = complete_graph(4).unwrap();
        let counts = edge_pair_counts(&k4, 1).unwrap();
        let pred = predicted_signs(&k4, 1, &counts, None).unwrap();
        assert_eq!(
            pred,
            SignPrediction::Complete { middle: BigInt::from(-2), last: BigInt::from(-4), via_decomposition: None }
        );
        assert!(pred.all_negative());

        let k22 = complete_bipartite_graph(2, 2).unwrap();
        let counts = edge_pair_counts(&k22, 1).unwrap();
        match predicted_signs(&k22, 1, &counts, None).unwrap() {
            SignPrediction::Bipartite { r_minus_p_minus_q, identities_hold, .. } => {
                assert_eq!(r_minus_p_minus_q, BigInt::from(-2));
                assert!(identities_hold);
            }
            other => panic!("unexpected {other:?}"),
        }

        let k5 = complete_graph(5).unwrap();
        let counts = edge_pair_counts(&k5, 2).unwrap();
        let d = pq_decomposition(5, 2).unwrap();
        let pred = predicted_signs(&k5, 2, &counts, Some(&d)).unwrap();
        assert!(pred.all_negative());
        assert!(predicted_signs(&k5, 3, &counts, None).is_err());
    }
}
