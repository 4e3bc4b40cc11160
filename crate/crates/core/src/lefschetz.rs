//! The graded Artinian Gorenstein algebra `A = K[x]/Ann(Φ)` through its
//! inverse system: catalecticants, Hilbert functions, graded bases, higher
//! Hessians and the determinant criterion for the strong Lefschetz property.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, GraphKind};
use crate::linalg::{ExactMatrix, IndependentRows};
use crate::matroid::{basis_generating_polynomial, forest_generating_function, graphic_matroid, truncate};
use crate::poly::{all_ones, apply_diff_operator, Monomial, Polynomial};
use crate::spectra::{closed_form_spectrum, exact_determinant, structured_params, tilde_hessian, verify_spectrum};

/// Pairing between degree-`k` operators and the coefficients of their
/// images `u(∂)Φ`.
///
/// Rows are the degree-`k` monomials dividing some term of `Φ`, in monomial
/// order; every other monomial annihilates `Φ` and would add a zero row.
/// Columns are the monomials occurring in some image.
#[derive(Debug, Clone)]
pub struct Catalecticant {
    pub degree: usize,
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    pub matrix: ExactMatrix,
    images: Vec<Polynomial>,
}

impl Catalecticant {
    /// `u(∂)Φ` for the row monomial `rows[i]`.
    pub fn image(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    /// Whether the degree-`k` form `c` lies in `Ann(Φ)`, read off as a left
    /// kernel vector of the matrix.
    pub fn annihilates(&self, c: &Polynomial) -> Result<bool> {
        if c.terms().keys().any(|m| m.degree() != self.degree) {
            return Err(invalid!("form {c} is not homogeneous of degree {}", self.degree));
        }
        let mut combo = vec![BigRational::zero(); self.cols.len()];
        for (m, coeff) in c.terms() {
            if let Ok(i) = self.rows.binary_search(m) {
                for (acc, x) in combo.iter_mut().zip(self.matrix.row(i)) {
                    *acc += coeff * x;
                }
            }
        }
        Ok(combo.iter().all(Zero::is_zero))
    }
}

fn degree_of(phi: &Polynomial) -> Result<usize> {
    if phi.is_zero() {
        return Err(invalid!("the zero polynomial has no inverse system algebra"));
    }
    phi.homogeneous_degree()
        .ok_or_else(|| invalid!("polynomial {phi} is not homogeneous"))
}

/// Degree-`k` monomials dividing `m`.
fn divisors_of_degree(m: &Monomial, k: usize, out: &mut BTreeSet<Monomial>) {
    fn go(m: &Monomial, i: usize, left: usize, cur: &mut Monomial, out: &mut BTreeSet<Monomial>) {
        if left == 0 {
            out.insert(cur.clone());
            return;
        }
        if i == m.0.len() {
            return;
        }
        let top = (m.0[i] as usize).min(left);
        for e in (0..=top).rev() {
            cur.0[i] = e as u16;
            go(m, i + 1, left - e, cur, out);
        }
        cur.0[i] = 0;
    }
    let mut cur = Monomial::one(m.0.len());
    go(m, 0, k, &mut cur, out);
}

pub fn catalecticant_matrix(phi: &Polynomial, k: usize) -> Result<Catalecticant> {
    let s = degree_of(phi)?;
    if k > s {
        return Err(invalid!("degree {k} exceeds deg Φ = {s}"));
    }
    let mut rows = BTreeSet::new();
    for m in phi.terms().keys() {
        divisors_of_degree(m, k, &mut rows);
    }
    let rows: Vec<Monomial> = rows.into_iter().collect();
    let images: Vec<Polynomial> = rows
        .par_iter()
        .map(|u| apply_diff_operator(&Polynomial::from_terms(phi.vars().clone(), [(u.clone(), BigRational::one())]), phi))
        .collect::<Result<_>>()?;
    let cols: Vec<Monomial> = images
        .iter()
        .flat_map(|p| p.terms().keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let matrix = ExactMatrix::from_fn(rows.len(), cols.len(), |i, j| images[i].coefficient(&cols[j]));
    Ok(Catalecticant { degree: k, rows, cols, matrix, images })
}

/// `(h_0, ..., h_s)` with `h_k = dim A_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertProfile {
    pub dims: Vec<usize>,
}

impl HilbertProfile {
    pub fn socle_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn is_symmetric(&self) -> bool {
        self.dims.iter().eq(self.dims.iter().rev())
    }
}

pub fn hilbert_function(phi: &Polynomial) -> Result<HilbertProfile> {
    let s = degree_of(phi)?;
    let dims = (0..=s)
        .into_par_iter()
        .map(|k| Ok(catalecticant_matrix(phi, k)?.matrix.rank()))
        .collect::<Result<Vec<_>>>()?;
    let profile = HilbertProfile { dims };
    if !profile.is_symmetric() {
        return Err(Error::StructureViolation(format!("Hilbert function {:?} is not symmetric", profile.dims)));
    }
    Ok(profile)
}

/// Monomials whose classes form a basis of `A_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    pub degree: usize,
    pub monomials: Vec<Monomial>,
}

impl GradedBasis {
    pub fn names(&self, vars: &[String]) -> Vec<String> {
        self.monomials.iter().map(|m| monomial_name(vars, m)).collect()
    }
}

pub fn monomial_name(vars: &[String], m: &Monomial) -> String {
    let factors: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, &e)| if e == 1 { vars[i].clone() } else { format!("{}^{e}", vars[i]) })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

fn greedy_basis(cat: &Catalecticant) -> Vec<usize> {
    let mut tracker = IndependentRows::new();
    (0..cat.rows.len()).filter(|&i| tracker.insert(cat.matrix.row(i))).collect()
}

/// Earliest monomials in monomial order with independent catalecticant rows.
pub fn graded_basis(phi: &Polynomial, k: usize) -> Result<GradedBasis> {
    let cat = catalecticant_matrix(phi, k)?;
    let monomials = greedy_basis(&cat).into_iter().map(|i| cat.rows[i].clone()).collect();
    Ok(GradedBasis { degree: k, monomials })
}

fn check_point(phi: &Polynomial, point: &[BigRational]) -> Result<()> {
    if point.len() != phi.nvars() {
        return Err(invalid!("point assigns {} values for {} variables", point.len(), phi.nvars()));
    }
    Ok(())
}

/// `(e_i e_j)(∂)Φ` at `point` over the greedy basis of `A_k`.
fn hessian_from(cat: &Catalecticant, basis: &[usize], point: &[BigRational]) -> Result<ExactMatrix> {
    let h = basis.len();
    let vars = cat.images.first().map(|p| p.vars().clone());
    let upper: Vec<Vec<BigRational>> = (0..h)
        .into_par_iter()
        .map(|a| {
            (a..h)
                .map(|b| {
                    let vars = vars.clone().expect("nonempty basis");
                    let ej = Polynomial::from_terms(vars, [(cat.rows[basis[b]].clone(), BigRational::one())]);
                    apply_diff_operator(&ej, &cat.images[basis[a]])?.evaluate(point)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(ExactMatrix::from_fn(h, h, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        upper[a][b - a].clone()
    }))
}

/// The `k`-th Hessian matrix `H^(k)` at `point`, over [`graded_basis`].
pub fn higher_hessian(phi: &Polynomial, k: usize, point: &[BigRational]) -> Result<ExactMatrix> {
    let s = degree_of(phi)?;
    if 2 * k > s {
        return Err(invalid!("k = {k} exceeds s/2 for deg Φ = {s}"));
    }
    check_point(phi, point)?;
    let cat = catalecticant_matrix(phi, k)?;
    let basis = greedy_basis(&cat);
    hessian_from(&cat, &basis, point)
}

/// Multiplication-map route: `(e_i L^{s-2k} e_j)(∂)Φ`, which should equal
/// `(s-2k)! H^(k)` entry by entry.
fn multiplication_pairing(
    phi: &Polynomial,
    cat: &Catalecticant,
    basis: &[usize],
    point: &[BigRational],
    power: usize,
) -> Result<ExactMatrix> {
    let vars = phi.vars().clone();
    let linear = Polynomial::from_terms(
        vars.clone(),
        point
            .iter()
            .enumerate()
            .map(|(i, a)| (Monomial::from_indices(vars.len(), &[i]), a.clone())),
    );
    let l_pow = linear.pow(power)?;
    let h = basis.len();
    let entries: Vec<BigRational> = (0..h * h)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / h, idx % h);
            let ei = Polynomial::from_terms(vars.clone(), [(cat.rows[basis[a]].clone(), BigRational::one())]);
            let ej = Polynomial::from_terms(vars.clone(), [(cat.rows[basis[b]].clone(), BigRational::one())]);
            let op = ei.mul(&l_pow)?.mul(&ej)?;
            let value = apply_diff_operator(&op, phi)?;
            Ok(value.coefficient(&Monomial::one(vars.len())))
        })
        .collect::<Result<_>>()?;
    Ok(ExactMatrix::from_fn(h, h, |i, j| entries[i * h + j].clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVerdict {
    pub k: usize,
    pub basis: Vec<String>,
    pub determinant: BigRational,
    /// `×L^{s-2k}: A_k -> A_{s-k}` is bijective.
    pub bijective: bool,
    /// The multiplication-map pairing equals `(s-2k)! H^(k)`.
    pub cross_route_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlpReport {
    pub coefficients: Vec<BigRational>,
    pub hilbert: HilbertProfile,
    pub degrees: Vec<DegreeVerdict>,
}

impl SlpReport {
    /// `L` is a strong Lefschetz element.
    pub fn is_strong_lefschetz(&self) -> bool {
        self.degrees.iter().all(|d| d.bijective)
    }

    pub fn routes_agree(&self) -> bool {
        self.degrees.iter().all(|d| d.cross_route_agrees)
    }
}

fn factorial(n: usize) -> BigRational {
    BigRational::from_integer((1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

/// Determinant criterion for `L = Σ a_i x_i` in every degree `k <= s/2`.
pub fn slp_check(phi: &Polynomial, coeffs: &[BigRational]) -> Result<SlpReport> {
    let s = degree_of(phi)?;
    check_point(phi, coeffs)?;
    let hilbert = hilbert_function(phi)?;
    let degrees = (0..=s / 2)
        .map(|k| {
            let cat = catalecticant_matrix(phi, k)?;
            let basis = greedy_basis(&cat);
            if basis.len() != hilbert.dims[k] {
                return Err(Error::StructureViolation(format!(
                    "basis of A_{k} has {} elements but h_{k} = {}",
                    basis.len(),
                    hilbert.dims[k]
                )));
            }
            let hessian = hessian_from(&cat, &basis, coeffs)?;
            let determinant = exact_determinant(&hessian)?;
            let pairing = multiplication_pairing(phi, &cat, &basis, coeffs, s - 2 * k)?;
            let scale = factorial(s - 2 * k);
            let cross_route_agrees = (0..basis.len())
                .all(|i| (0..basis.len()).all(|j| *pairing.get(i, j) == hessian.get(i, j) * &scale));
            Ok(DegreeVerdict {
                k,
                basis: basis.iter().map(|&i| monomial_name(phi.vars(), &cat.rows[i])).collect(),
                bijective: !determinant.is_zero(),
                determinant,
                cross_route_agrees,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SlpReport { coefficients: coeffs.to_vec(), hilbert, degrees })
}

/// Basis generating polynomial of the rank-`r` truncation of the graphic
/// matroid of `g`.
pub fn truncated_graphic_polynomial(g: &Graph, r: usize) -> Result<Polynomial> {
    let m = graphic_matroid(g)?;
    Ok(basis_generating_polynomial(&truncate(&m, r)?))
}

/// Where `r` sits relative to the stated hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeStatus {
    /// `2 < r < |V|`, the range in which the Hessian theorems apply.
    pub natural: bool,
    /// The range as literally written: `2 < r < n` and `n <= 5`, with `n`
    /// the vertex count (complete) or the second part size (bipartite).
    pub literal: bool,
}

pub fn range_status(g: &Graph, r: usize) -> RangeStatus {
    let v = g.vertex_count();
    let n = match g.kind() {
        GraphKind::Complete { n } => n,
        GraphKind::CompleteBipartite { n, .. } => n,
    };
    RangeStatus { natural: r > 2 && r < v, literal: r > 2 && r < n && n <= 5 }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeOneVerdict {
    pub range: RangeStatus,
    /// `h_1` equals the number of edges, so `Λ_1` is all variables.
    pub variables_independent: bool,
    /// The truncated matroid polynomial equals the forest generating function.
    pub matches_forest_polynomial: bool,
    /// `det H̃`, from the certified closed-form spectrum.
    pub spectral_determinant: BigRational,
    /// `det H̃` by direct elimination.
    pub direct_determinant: BigRational,
    pub spectrum_certified: bool,
    /// `×L^{r-2}: A_1 -> A_{r-1}` is bijective for `L = Σ x_e`.
    pub bijective: bool,
}

/// Degree-one Lefschetz check for the truncated graphic matroid `M^r` of
/// `g`, through the Hessian of the `(|V| - r)`-component forest polynomial.
pub fn check_degree_one_lefschetz(g: &Graph, r: usize) -> Result<DegreeOneVerdict> {
    let v = g.vertex_count();
    if r < 2 || r >= v {
        return Err(invalid!("rank r = {r} must satisfy 2 <= r < {v} for a Hessian on A_1"));
    }
    let k = v - r;
    let phi = truncated_graphic_polynomial(g, r)?;
    let matches_forest_polynomial = phi == forest_generating_function(g, k)?;
    let h1 = catalecticant_matrix(&phi, 1)?.matrix.rank();
    let h = tilde_hessian(g, k)?;
    let spectrum = closed_form_spectrum(&structured_params(&h, g)?)?;
    let spectrum_certified = verify_spectrum(&h, &spectrum)?;
    let spectral_determinant = spectrum.determinant();
    let direct_determinant = exact_determinant(&h)?;
    let variables_independent = h1 == g.edge_count();
    // With Λ_1 = all variables, H^(1)(1, ..., 1) is H̃ itself.
    let via_hessian = higher_hessian(&phi, 1, &all_ones(phi.nvars()))?;
    let bijective = variables_independent
        && spectrum_certified
        && via_hessian == h
        && spectral_determinant == direct_determinant
        && !direct_determinant.is_zero();
    Ok(DegreeOneVerdict {
        range: range_status(g, r),
        variables_independent,
        matches_forest_polynomial,
        spectral_determinant,
        direct_determinant,
        spectrum_certified,
        bijective,
    })
}
