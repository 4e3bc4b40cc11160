//! Exact multivariate polynomials with differentiation and differential
//! operator application.
//!
//! Exponent vectors are dense (one small integer per variable); terms live in
//! a `BTreeMap` so iteration order is deterministic. A polynomial `P` acts on
//! another polynomial `Φ` by substituting `x_i -> ∂/∂x_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{invalid, Result};
use crate::linalg::ExactMatrix;

pub type Exponents = SmallVec<[u16; 24]>;

/// A monomial `x^α` as its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Exponents);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_indices(nvars: usize, indices: &[usize]) -> Self {
        let mut m = Self::one(nvars);
        for &i in indices {
            m.0[i] += 1;
        }
        m
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Variable indices with multiplicity, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }
}

/// Monomials compare by total degree first, then so that `x_1` comes before
/// `x_2` (the sorted index lists compare lexicographically). Within a degree
/// this is lexicographic order with `x_1 > x_2 > ...`, listed largest first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with rational coefficients over a named variable list.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{e}", self.vars[i]) })
                .collect();
            match (c.is_one(), factors.is_empty()) {
                (true, false) => write!(f, "{}", factors.join("*"))?,
                (_, true) => write!(f, "{c}")?,
                (false, false) => write!(f, "{c}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Polynomial {
    pub fn zero(vars: Arc<[String]>) -> Self {
        Polynomial { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<[String]>, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        let one = Monomial::one(p.vars.len());
        p.add_term(one, c);
        p
    }

    pub fn variable(vars: Arc<[String]>, i: usize) -> Result<Self> {
        if i >= vars.len() {
            return Err(invalid!("variable index {i} out of range for {} variables", vars.len()));
        }
        let n = vars.len();
        Ok(Self::from_terms(vars, [(Monomial::from_indices(n, &[i]), BigRational::one())]))
    }

    pub fn from_terms(vars: Arc<[String]>, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), p.vars.len(), "exponent vector length must match the variable count");
            p.add_term(m, c);
        }
        p
    }

    /// Sum of square-free monomials with coefficient one.
    pub fn square_free_sum(vars: Arc<[String]>, supports: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let n = vars.len();
        Self::from_terms(
            vars,
            supports.into_iter().map(|s| (Monomial::from_indices(n, &s), BigRational::one())),
        )
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn is_square_free(&self) -> bool {
        self.terms.keys().all(Monomial::is_square_free)
    }

    fn check_same_vars(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(invalid!("polynomials are over different variable lists"))
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        Polynomial::from_terms(self.vars.clone(), self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_vars(other)?;
        let mut out = Polynomial::zero(self.vars.clone());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Result<Polynomial> {
        let mut out = Polynomial::constant(self.vars.clone(), BigRational::one());
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `∂/∂x_v`, with the variable given by index.
    pub fn partial_derivative(&self, v: usize) -> Result<Polynomial> {
        if v >= self.nvars() {
            return Err(invalid!("unknown variable index {v} ({} variables)", self.nvars()));
        }
        let mut out = Polynomial::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[v] -= 1;
            out.terms.insert(d, c * BigRational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// `∂/∂x`, with the variable given by name.
    pub fn partial_derivative_by_name(&self, name: &str) -> Result<Polynomial> {
        let v = self.var_index(name).ok_or_else(|| invalid!("unknown variable {name}"))?;
        self.partial_derivative(v)
    }

    /// Exact value at `point`, which assigns one rational per variable in order.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.nvars() {
            return Err(invalid!(
                "point assigns {} values but the polynomial has {} variables",
                point.len(),
                self.nvars()
            ));
        }
        Ok(evaluate_terms(&self.terms, point))
    }

    /// Matrix of second partials evaluated at `point`, rows and columns in
    /// variable order.
    pub fn hessian_matrix(&self, point: &[BigRational]) -> Result<ExactMatrix> {
        let n = self.nvars();
        if point.len() != n {
            return Err(invalid!("point assigns {} values but the polynomial has {n} variables", point.len()));
        }
        let gradient: Vec<Polynomial> = (0..n)
            .into_par_iter()
            .map(|i| self.partial_derivative(i))
            .collect::<Result<_>>()?;
        let upper: Vec<Vec<BigRational>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (i..n)
                    .map(|j| {
                        let second = gradient[i].partial_derivative(j)?;
                        Ok(evaluate_terms(&second.terms, point))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(ExactMatrix::from_fn(n, n, |i, j| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            upper[a][b - a].clone()
        }))
    }
}

fn evaluate_terms(terms: &BTreeMap<Monomial, BigRational>, point: &[BigRational]) -> BigRational {
    let all_ones = point.iter().all(One::is_one);
    let mut acc = BigRational::zero();
    for (m, c) in terms {
        if all_ones {
            acc += c;
            continue;
        }
        let mut v = c.clone();
        for (x, &e) in point.iter().zip(&m.0) {
            if e > 0 {
                v *= num_traits::pow(x.clone(), e as usize);
            }
        }
        acc += v;
    }
    acc
}

/// `x^α(∂)` applied to `c x^β`: zero unless `α ≤ β`, otherwise
/// `c Π β_i!/(β_i-α_i)! x^{β-α}`.
fn apply_monomial(op: &Monomial, target: &Monomial) -> Option<(Monomial, BigInt)> {
    if !op.divides(target) {
        return None;
    }
    let mut factor = BigInt::one();
    let mut rest = target.clone();
    for (i, &a) in op.0.iter().enumerate() {
        let b = target.0[i];
        for t in 0..a {
            factor *= BigInt::from(b - t);
        }
        rest.0[i] = b - a;
    }
    Some((rest, factor))
}

/// `op(∂/∂x_1, ..., ∂/∂x_N) target`.
pub fn apply_diff_operator(op: &Polynomial, target: &Polynomial) -> Result<Polynomial> {
    op.check_same_vars(target)?;
    let mut out = Polynomial::zero(target.vars.clone());
    for (a, x) in &op.terms {
        for (b, y) in &target.terms {
            if let Some((m, factor)) = apply_monomial(a, b) {
                out.add_term(m, x * y * BigRational::from_integer(factor));
            }
        }
    }
    Ok(out)
}

/// The point with every coordinate equal to one.
pub fn all_ones(n: usize) -> Vec<BigRational> {
    vec![BigRational::one(); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vars(n: usize) -> Arc<[String]> {
        (0..n).map(|i| format!("x{i}")).collect::<Vec<_>>().into()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn derivative_basics() {
        let v = vars(2);
        let ab = Polynomial::square_free_sum(v.clone(), [vec![0, 1]]);
        assert_eq!(ab.partial_derivative(0).unwrap(), Polynomial::variable(v.clone(), 1).unwrap());
        let c = Polynomial::constant(v.clone(), q(7));
        assert!(c.partial_derivative(0).unwrap().is_zero());
        assert!(ab.partial_derivative(2).is_err());
        assert!(ab.partial_derivative_by_name("y").is_err());
        let x0 = Polynomial::variable(v.clone(), 0).unwrap();
        let cube = x0.pow(3).unwrap();
        assert_eq!(cube.partial_derivative(0).unwrap(), x0.pow(2).unwrap().scale(&q(3)));
    }

    #[test]
    fn operator_basics() {
        let v = vars(3);
        let ab = Polynomial::square_free_sum(v.clone(), [vec![0, 1]]);
        let one = Polynomial::constant(v.clone(), q(1));
        assert_eq!(apply_diff_operator(&ab, &ab).unwrap(), one);
        let sq = Polynomial::variable(v.clone(), 0).unwrap().pow(2).unwrap();
        let phi = Polynomial::square_free_sum(v.clone(), [vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(apply_diff_operator(&sq, &phi).unwrap().is_zero());
        assert!(apply_diff_operator(&sq, &Polynomial::zero(vars(2))).is_err());
        // x0^2 (∂) x0^3 = 6 x0
        let x0 = Polynomial::variable(v.clone(), 0).unwrap();
        assert_eq!(apply_diff_operator(&sq, &x0.pow(3).unwrap()).unwrap(), x0.scale(&q(6)));
    }

    #[test]
    fn evaluation() {
        let v = vars(3);
        let phi = Polynomial::square_free_sum(v.clone(), [vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(phi.evaluate(&all_ones(3)).unwrap(), q(3));
        assert!(phi.evaluate(&vec![q(0); 3]).unwrap().is_zero());
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(phi.evaluate(&[half.clone(), q(2), q(3)]).unwrap(), half.clone() * q(2) + half * q(3) + q(6));
        assert!(phi.evaluate(&all_ones(2)).is_err());
    }

    #[test]
    fn hessian_of_linear_is_zero() {
        let v = vars(4);
        let lin = Polynomial::square_free_sum(v, [vec![0], vec![1], vec![3]]);
        assert!(lin.hessian_matrix(&all_ones(4)).unwrap().is_zero());
    }

    #[test]
    fn monomial_order() {
        let n = 3;
        let mut ms: Vec<Monomial> = [vec![1, 2], vec![0], vec![0, 1], vec![2], vec![0, 2]]
            .iter()
            .map(|s| Monomial::from_indices(n, s))
            .collect();
        ms.sort();
        let lists: Vec<Vec<usize>> = ms.iter().map(Monomial::indices).collect();
        assert_eq!(lists, vec![vec![0], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    fn square_free_poly(n: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((proptest::collection::vec(any::<bool>(), n), -3i64..=3), 0..8).prop_map(
            move |terms| {
                Polynomial::from_terms(
                    vars(n),
                    terms.into_iter().map(|(bits, c)| {
                        let idx: Vec<usize> = bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
                        (Monomial::from_indices(n, &idx), q(c))
                    }),
                )
            },
        )
    }

    fn small_poly(n: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((proptest::collection::vec(0u16..3, n), -3i64..=3), 0..6).prop_map(move |terms| {
            Polynomial::from_terms(vars(n), terms.into_iter().map(|(e, c)| (Monomial(e.into_iter().collect()), q(c))))
        })
    }

    proptest! {
        #[test]
        fn mixed_partials_commute(p in square_free_poly(5), i in 0usize..5, j in 0usize..5) {
            let a = p.partial_derivative(i).unwrap().partial_derivative(j).unwrap();
            let b = p.partial_derivative(j).unwrap().partial_derivative(i).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn operator_product_is_composition(a in small_poly(3), b in small_poly(3), phi in small_poly(3)) {
            let lhs = apply_diff_operator(&a.mul(&b).unwrap(), &phi).unwrap();
            let rhs = apply_diff_operator(&a, &apply_diff_operator(&b, &phi).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hessian_entries_count_shared_monomials(
            supports in proptest::collection::btree_set(proptest::collection::vec(any::<bool>(), 5), 0..10)
        ) {
            let p = Polynomial::square_free_sum(
                vars(5),
                supports.iter().map(|b| b.iter().enumerate().filter(|(_, x)| **x).map(|(i, _)| i).collect()),
            );
            let h = p.hessian_matrix(&all_ones(5)).unwrap();
            prop_assert!(h.is_symmetric());
            for i in 0..5 {
                for j in 0..5 {
                    let expected = if i == j {
                        0
                    } else {
                        p.terms().keys().filter(|m| m.0[i] == 1 && m.0[j] == 1).count() as i64
                    };
                    prop_assert_eq!(h.get(i, j), &q(expected));
                }
            }
        }
    }
}
