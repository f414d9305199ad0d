//! Dense matrices over a [`Ring`].
//!
//! Determinants, inverses and elimination assume the entries commute with
//! each other (rationals, polynomials, even Grassmann elements). Products are
//! computed in index order and are valid for any ring.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Field, Rational, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for {rows}x{cols}", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn diagonal(d: &[R]) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { R::zero() })
    }

    pub fn from_column(v: &[R]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
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

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<R> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &all)
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!("hstack {} vs {} rows", self.rows, other.rows)));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!("vstack {} vs {} cols", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = R::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
            acc
        }))
    }

    /// Entrywise `c * m_ij`.
    pub fn scale_left(&self, c: &R) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero() && (0..i).all(|j| *self.get(i, j) == -self.get(j, i).clone())
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Determinant for commuting entries. Sizes up to 6 use memoized Laplace
    /// expansion (no division); larger sizes eliminate with unit pivots.
    pub fn det(&self) -> Result<R> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("det of {}x{}", self.rows, self.cols)));
        }
        if self.rows <= 6 {
            let mut memo = HashMap::new();
            Ok(self.laplace(0, (1u64 << self.rows) - 1, &mut memo))
        } else {
            Ok(self.det_elimination())
        }
    }

    // det of rows `row..` against the column set `mask`
    fn laplace(&self, row: usize, mask: u64, memo: &mut HashMap<u64, R>) -> R {
        if row == self.rows {
            return R::one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = R::zero();
        let mut position = 0;
        for j in 0..self.cols {
            if mask >> j & 1 == 0 {
                continue;
            }
            let a = self.get(row, j);
            if !a.is_zero() {
                let minor = self.laplace(row + 1, mask & !(1 << j), memo);
                let term = a.clone() * minor;
                acc = if position % 2 == 0 { acc + term } else { acc - term };
            }
            position += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    fn det_elimination(&self) -> R {
        let n = self.rows;
        let mut m = self.to_rows();
        let mut acc = R::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| m[r][c].is_unit()) else {
                // no unit pivot left: expand what remains
                let rest: Vec<usize> = (c..n).collect();
                let sub = Matrix::from_rows(m[c..].iter().map(|row| rest.iter().map(|&j| row[j].clone()).collect()).collect())
                    .expect("square");
                let mut memo = HashMap::new();
                return acc * sub.laplace_general(0, (0..sub.cols).collect(), &mut memo);
            };
            if p != c {
                m.swap(p, c);
                acc = -acc;
            }
            let inv = m[c][c].try_inv().expect("unit pivot");
            acc = acc * m[c][c].clone();
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let factor = m[r][c].clone() * inv.clone();
                for j in c..n {
                    let v = m[r][j].clone() - factor.clone() * m[c][j].clone();
                    m[r][j] = v;
                }
            }
        }
        acc
    }

    // Laplace expansion without the 64-column limit of the mask variant.
    fn laplace_general(&self, row: usize, cols: Vec<usize>, memo: &mut HashMap<Vec<usize>, R>) -> R {
        if row == self.rows {
            return R::one();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = R::zero();
        for (pos, &j) in cols.iter().enumerate() {
            let a = self.get(row, j);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let term = a.clone() * self.laplace_general(row + 1, rest, memo);
            acc = if pos % 2 == 0 { acc + term } else { acc - term };
        }
        memo.insert(cols, acc.clone());
        acc
    }

    /// Gauss-Jordan inverse with unit pivots, for commuting entries.
    pub fn try_inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut m = self.to_rows();
        let mut inv = Matrix::<R>::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n).find(|&r| m[r][c].is_unit()).ok_or(Error::NotInvertible)?;
            m.swap(p, c);
            inv.swap(p, c);
            let pinv = m[c][c].try_inv().expect("unit pivot");
            for j in 0..n {
                m[c][j] = pinv.clone() * m[c][j].clone();
                inv[c][j] = pinv.clone() * inv[c][j].clone();
            }
            for r in 0..n {
                if r == c || m[r][c].is_zero() {
                    continue;
                }
                let factor = m[r][c].clone();
                for j in 0..n {
                    m[r][j] = m[r][j].clone() - factor.clone() * m[c][j].clone();
                    inv[r][j] = inv[r][j].clone() - factor.clone() * inv[c][j].clone();
                }
            }
        }
        Matrix::from_rows(inv)
    }
}

impl<F: Field> Matrix<F> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, r);
            let inv = F::one() / m[r][c].clone();
            for j in 0..self.cols {
                m[r][j] = m[r][j].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let factor = m[i][c].clone();
                    for j in 0..self.cols {
                        m[i][j] = m[i][j].clone() - factor.clone() * m[r][j].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rows = self.rows;
        let cols = self.cols;
        (Matrix { rows, cols, data: m.into_iter().flatten().collect() }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Some `x` with `M x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let aug = self.hstack(&Matrix::from_column(b)).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn same_column_space(&self, other: &Self) -> bool {
        match self.hstack(other) {
            Ok(both) => {
                let r = both.rank();
                r == self.rank() && r == other.rank()
            }
            Err(_) => false,
        }
    }
}

/// Rank by fraction-free (Bareiss) elimination after clearing denominators.
pub fn rank_exact(m: &Matrix<Rational>) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
            row.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

impl Matrix<Rational> {
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| crate::scalar::int(x)).collect()).collect())
            .expect("rectangular")
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect()
    }

    pub fn from_string_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let parsed: Result<Vec<Vec<Rational>>> = rows
            .iter()
            .map(|r| r.iter().map(|s| crate::scalar::parse_rational(s.as_ref())).collect())
            .collect();
        Matrix::from_rows(parsed?)
    }

    /// One line per row, comma separated.
    pub fn to_csv(&self) -> String {
        self.to_string_rows().iter().map(|r| r.join(",") + "\n").collect()
    }

    pub fn max_abs_height(&self) -> BigInt {
        self.data
            .iter()
            .map(|q| q.numer().abs().max(q.denom().clone()))
            .max()
            .unwrap_or_else(BigInt::one)
    }
}

impl fmt::Display for Matrix<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.to_string_rows() {
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

impl<R: Ring> Add for Matrix<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("matrix shape mismatch")
    }
}

impl<R: Ring> Neg for Matrix<R> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x.clone())
    }
}

impl<R: Ring> Sub for Matrix<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: Self) -> Matrix<R> {
        self.try_add(&-rhs.clone()).expect("matrix shape mismatch")
    }
}

impl<R: Ring> Mul for Matrix<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("matrix shape mismatch")
    }
}

impl<R: Ring> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: Self) -> Matrix<R> {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    type M = Matrix<Rational>;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_exact(&M::identity(3)), 3);
        assert_eq!(rank_exact(&M::from_int_rows(&[vec![0, 1, 2], vec![-1, 0, 1], vec![-2, -1, 0]])), 2);
        assert_eq!(rank_exact(&M::zeros(3, 4)), 0);
        let half = M::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), int(1)]]).unwrap();
        assert_eq!(rank_exact(&half), 1);
    }

    #[test]
    fn det_small_and_large_agree() {
        let m = M::from_int_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]);
        assert_eq!(m.det().unwrap(), int(6));
        let big = M::from_fn(8, 8, |i, j| int(((i * 3 + j * j + 1) % 7) as i64 - 3));
        let via_rref = big.rref().1.len();
        let d = big.det().unwrap();
        assert_eq!(d.is_zero(), via_rref < 8);
        // product of two 8x8 matrices
        let other = M::from_fn(8, 8, |i, j| int(((i + 2 * j) % 5) as i64 - 1));
        assert_eq!((big.clone() * other.clone()).det().unwrap(), d * other.det().unwrap());
    }

    #[test]
    fn nullspace_and_solve() {
        let m = M::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.try_mul(&M::from_column(v)).unwrap().is_zero());
        }
        let x = m.solve(&[int(1), int(2)]).unwrap();
        assert_eq!(m.try_mul(&M::from_column(&x)).unwrap().col(0), vec![int(1), int(2)]);
        assert!(m.solve(&[int(1), int(3)]).is_none());
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = M> {
        prop::collection::vec(-4i64..5, n * n)
            .prop_map(move |v| M::new(n, n, v.into_iter().map(int).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn bareiss_matches_rref(m in arb_matrix(5)) {
            prop_assert_eq!(rank_exact(&m), m.rank());
        }

        #[test]
        fn inverse_roundtrip(m in arb_matrix(4)) {
            if let Ok(inv) = m.try_inverse() {
                prop_assert_eq!(m.clone() * inv, M::identity(4));
            } else {
                prop_assert!(m.det().unwrap().is_zero());
            }
        }
    }
}
