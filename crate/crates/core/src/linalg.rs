//! Dense exact matrices over the rationals.
//!
//! Determinants and ranks use fraction-free (Bareiss) elimination: each row
//! is first scaled to integers by the lcm of its denominators, so elimination
//! runs entirely in `BigInt` with exact divisions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(invalid!("ragged rows"));
        }
        let n = rows.len();
        Ok(ExactMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|x| BigRational::from_integer((*x).into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(invalid!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let data: Vec<BigRational> = (0..self.rows)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..other.cols).map(move |j| {
                    let mut acc = BigRational::zero();
                    for l in 0..self.cols {
                        let a = self.get(i, l);
                        if !a.is_zero() {
                            acc += a * other.get(l, j);
                        }
                    }
                    acc
                })
            })
            .collect();
        Ok(ExactMatrix { rows: self.rows, cols: other.cols, data })
    }

    /// `self - lambda * I`.
    pub fn shift(&self, lambda: &BigRational) -> Result<Self> {
        if !self.is_square() {
            return Err(invalid!("shift needs a square matrix"));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) - lambda;
            m.set(i, i, v);
        }
        Ok(m)
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Rows scaled to integers, with the product of the scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        (rows, scale)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(invalid!("determinant of a non-square {}x{} matrix", self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigRational::one());
        }
        let (mut m, scale) = self.integer_rows();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(BigRational::zero()),
                }
            }
            let (top, rest) = m.split_at_mut(k + 1);
            let pivot_row = &top[k];
            rest.par_iter_mut().for_each(|row| {
                for j in k + 1..n {
                    let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[k] = BigInt::zero();
            });
            prev = m[k][k].clone();
        }
        let mut det = m[n - 1][n - 1].clone();
        if negate {
            det = -det;
        }
        Ok(BigRational::new(det, scale))
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let (mut m, _) = self.integer_rows();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, rank);
            let (top, rest) = m.split_at_mut(rank + 1);
            let pivot_row = &top[rank];
            rest.par_iter_mut().for_each(|row| {
                for j in c + 1..self.cols {
                    let v = &row[j] * &pivot_row[c] - &row[c] * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[c] = BigInt::zero();
            });
            prev = m[rank][c].clone();
            rank += 1;
        }
        rank
    }
}

/// Greedy row-independence tracker: feed candidate rows in order and keep the
/// ones independent of those already accepted. Rows are kept primitive
/// (content divided out) so entries stay small.
#[derive(Debug, Clone, Default)]
pub struct IndependentRows {
    basis: Vec<(usize, Vec<BigInt>)>,
}

impl IndependentRows {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduce `row` against the accepted rows; returns true (and keeps it)
    /// if it is independent of them.
    pub fn insert(&mut self, row: &[BigRational]) -> bool {
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut v: Vec<BigInt> = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
        for (pivot, w) in &self.basis {
            if v[*pivot].is_zero() {
                continue;
            }
            let a = w[*pivot].clone();
            let b = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(w) {
                *x = &a * &*x - &b * y;
            }
            make_primitive(&mut v);
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.basis.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Cofactor expansion along the first row.
    fn cofactor_det(m: &ExactMatrix) -> BigRational {
        let n = m.rows();
        if n == 0 {
            return BigRational::one();
        }
        let mut total = BigRational::zero();
        for j in 0..n {
            let minor = ExactMatrix::from_fn(n - 1, n - 1, |r, c| {
                m.get(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = m.get(0, j) * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    /// Plain Gaussian elimination over the rationals.
    fn rational_rank(m: &ExactMatrix) -> usize {
        let mut rows: Vec<Vec<BigRational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(p, rank);
            for i in 0..rows.len() {
                if i != rank && !rows[i][c].is_zero() {
                    let factor = &rows[i][c] / &rows[rank][c];
                    for j in 0..m.cols() {
                        let v = &rows[rank][j] * &factor;
                        rows[i][j] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec((-4i64..=4, 1i64..=3), rows * cols).prop_map(move |v| {
            let mut it = v.into_iter();
            ExactMatrix::from_fn(rows, cols, |_, _| {
                let (n, d) = it.next().unwrap();
                q(n, d)
            })
        })
    }

    #[test]
    fn known_determinants() {
        let h2 = ExactMatrix::from_fn(6, 6, |i, j| if i == j { q(0, 1) } else { q(1, 1) });
        assert_eq!(h2.determinant().unwrap(), q(-5, 1));
        let h1 = ExactMatrix::from_i64(&[
            vec![0, 3, 4, 3, 3, 3],
            vec![3, 0, 3, 4, 3, 3],
            vec![4, 3, 0, 3, 3, 3],
            vec![3, 4, 3, 0, 3, 3],
            vec![3, 3, 3, 3, 0, 4],
            vec![3, 3, 3, 3, 4, 0],
        ])
        .unwrap();
        assert_eq!(h1.determinant().unwrap(), q(-4096, 1));
        assert_eq!(cofactor_det(&h1), q(-4096, 1));
        assert!(ExactMatrix::zeros(3, 3).determinant().unwrap().is_zero());
        assert!(ExactMatrix::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn rank_examples() {
        let m = ExactMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(ExactMatrix::zeros(3, 5).rank(), 0);
        assert_eq!(ExactMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn independent_rows_greedy() {
        let mut basis = IndependentRows::new();
        assert!(basis.insert(&[q(1, 2), q(0, 1), q(1, 1)]));
        assert!(!basis.insert(&[q(1, 1), q(0, 1), q(2, 1)]));
        assert!(basis.insert(&[q(0, 1), q(3, 1), q(0, 1)]));
        assert!(!basis.insert(&[q(1, 1), q(1, 1), q(2, 1)]));
        assert_eq!(basis.len(), 2);
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(m in (1usize..=5).prop_flat_map(|n| small_matrix(n, n))) {
            prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn rank_matches_rational_elimination(m in (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| small_matrix(r, c))) {
            prop_assert_eq!(m.rank(), rational_rank(&m));
            prop_assert_eq!(m.rank(), m.transpose().rank());
            let mut basis = IndependentRows::new();
            for i in 0..m.rows() {
                basis.insert(m.row(i));
            }
            prop_assert_eq!(basis.len(), m.rank());
        }
    }
}
