//! Pfaffians and Pfaffian adjugates of skew-symmetric matrices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Graded, Ring};

/// Skew-symmetric square matrix with even entries.
#[derive(Clone, PartialEq, Debug)]
pub struct SkewMatrix<R> {
    inner: Matrix<R>,
}

impl<R: Ring + Graded> SkewMatrix<R> {
    pub fn new(m: Matrix<R>) -> Result<Self> {
        if !m.is_skew() {
            return Err(Error::NotSkew);
        }
        if m.entries().iter().any(|x| !x.is_even_elt()) {
            return Err(Error::NotSkew);
        }
        Ok(SkewMatrix { inner: m })
    }

    /// Builds from the strict upper triangle, row by row.
    pub fn from_upper(n: usize, upper: &[R]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::ShapeMismatch(format!("{} upper entries for size {n}", upper.len())));
        }
        let mut m = Matrix::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().expect("counted").clone();
                m.set(j, i, -v.clone());
                m.set(i, j, v);
            }
        }
        SkewMatrix::new(m)
    }

    pub fn size(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<R> {
        self.inner
    }
}

struct PfMemo<'a, R> {
    m: &'a Matrix<R>,
    memo: HashMap<u64, R>,
}

impl<R: Ring> PfMemo<'_, R> {
    // Pfaffian of the principal submatrix on `mask`, expanded along its first index.
    fn pf(&mut self, mask: u64) -> R {
        if mask == 0 {
            return R::one();
        }
        if mask.count_ones() % 2 == 1 {
            return R::zero();
        }
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = R::zero();
        let mut position = 1;
        for j in 0..64 {
            if rest >> j & 1 == 0 {
                continue;
            }
            let a = self.m.get(i, j);
            if !a.is_zero() {
                let term = a.clone() * self.pf(rest & !(1 << j));
                acc = if position % 2 == 1 { acc + term } else { acc - term };
            }
            position += 1;
        }
        self.memo.insert(mask, acc.clone());
        acc
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Pfaffian, summing over perfect matchings by first-row expansion.
pub fn pf<R: Ring + Graded>(m: &SkewMatrix<R>) -> Result<R> {
    let n = m.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let mut memo = PfMemo { m: &m.inner, memo: HashMap::new() };
    Ok(memo.pf(full_mask(n)))
}

/// The matrix `R` of signed codimension-2 sub-Pfaffians with `M R = pf(M) I`.
/// Built without division, so the identity also holds for singular `M`.
pub fn pf_adjugate<R: Ring + Graded>(m: &SkewMatrix<R>) -> Result<Matrix<R>> {
    let n = m.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let full = full_mask(n);
    let mut memo = PfMemo { m: &m.inner, memo: HashMap::new() };
    let mut adj = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let sub = memo.pf(full & !(1 << i) & !(1 << j));
            // cofactor sign (-1)^{i+j+1+[i>j]}, stored transposed
            let negative = (i + j + 1 + usize::from(i > j)) % 2 == 1;
            adj.set(j, i, if negative { -sub } else { sub });
        }
    }
    Ok(adj)
}
