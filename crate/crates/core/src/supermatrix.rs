//! Block supermatrices over a Grassmann algebra and their Berezinians.
//!
//! Rows and columns are graded with the even indices first: a `(p|q) x (r|s)`
//! matrix has blocks `A` (p x r, even), `B` (p x s, odd), `C` (q x r, odd)
//! and `D` (q x s, even).

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElt, Parity, Shape};
use crate::matrix::Matrix;
use crate::scalar::{Field, Ring};

/// `(even | odd)` dimension pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
pub struct Dims {
    pub even: usize,
    pub odd: usize,
}

impl Dims {
    pub fn new(even: usize, odd: usize) -> Self {
        Dims { even, odd }
    }

    pub fn total(self) -> usize {
        self.even + self.odd
    }

    pub fn parity(self, i: usize) -> Parity {
        if i < self.even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct SuperMatrix<R> {
    row_dims: Dims,
    col_dims: Dims,
    entries: Matrix<GrassmannElt<R>>,
}

impl<R: Ring> SuperMatrix<R> {
    /// Checks that every entry is homogeneous of the parity its position demands.
    pub fn new(row_dims: Dims, col_dims: Dims, entries: Matrix<GrassmannElt<R>>) -> Result<Self> {
        if entries.rows() != row_dims.total() || entries.cols() != col_dims.total() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} entries for ({}|{})x({}|{})",
                entries.rows(),
                entries.cols(),
                row_dims.even,
                row_dims.odd,
                col_dims.even,
                col_dims.odd
            )));
        }
        for i in 0..entries.rows() {
            for j in 0..entries.cols() {
                let want = row_dims.parity(i).add(col_dims.parity(j));
                if !entries.get(i, j).has_parity(want) {
                    return Err(Error::NotHomogeneous(i, j));
                }
            }
        }
        Ok(SuperMatrix { row_dims, col_dims, entries })
    }

    pub fn from_blocks(
        a: Matrix<GrassmannElt<R>>,
        b: Matrix<GrassmannElt<R>>,
        c: Matrix<GrassmannElt<R>>,
        d: Matrix<GrassmannElt<R>>,
    ) -> Result<Self> {
        let row_dims = Dims::new(a.rows(), d.rows());
        let col_dims = Dims::new(a.cols(), d.cols());
        if b.rows() != a.rows() || b.cols() != d.cols() || c.rows() != d.rows() || c.cols() != a.cols() {
            return Err(Error::ShapeMismatch("inconsistent block sizes".into()));
        }
        let top = a.hstack(&b)?;
        let bottom = c.hstack(&d)?;
        SuperMatrix::new(row_dims, col_dims, top.vstack(&bottom)?)
    }

    pub fn identity(dims: Dims) -> Self {
        SuperMatrix { row_dims: dims, col_dims: dims, entries: Matrix::identity(dims.total()) }
    }

    pub fn row_dims(&self) -> Dims {
        self.row_dims
    }

    pub fn col_dims(&self) -> Dims {
        self.col_dims
    }

    pub fn entries(&self) -> &Matrix<GrassmannElt<R>> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &GrassmannElt<R> {
        self.entries.get(i, j)
    }

    fn block(&self, rows_even: bool, cols_even: bool) -> Matrix<GrassmannElt<R>> {
        let rows: Vec<usize> = if rows_even {
            (0..self.row_dims.even).collect()
        } else {
            (self.row_dims.even..self.row_dims.total()).collect()
        };
        let cols: Vec<usize> = if cols_even {
            (0..self.col_dims.even).collect()
        } else {
            (self.col_dims.even..self.col_dims.total()).collect()
        };
        self.entries.submatrix(&rows, &cols)
    }

    pub fn a(&self) -> Matrix<GrassmannElt<R>> {
        self.block(true, true)
    }

    pub fn b(&self) -> Matrix<GrassmannElt<R>> {
        self.block(true, false)
    }

    pub fn c(&self) -> Matrix<GrassmannElt<R>> {
        self.block(false, true)
    }

    pub fn d(&self) -> Matrix<GrassmannElt<R>> {
        self.block(false, false)
    }

    /// Entries modulo nilpotents.
    pub fn reduction(&self) -> Matrix<R> {
        self.entries.map(|x| x.constant_term())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.col_dims != other.row_dims {
            return Err(Error::ShapeMismatch(format!(
                "column dims {:?} vs row dims {:?}",
                self.col_dims, other.row_dims
            )));
        }
        let entries = self.entries.try_mul(&other.entries)?;
        Ok(SuperMatrix { row_dims: self.row_dims, col_dims: other.col_dims, entries })
    }

    fn check_square(&self) -> Result<()> {
        if self.row_dims != self.col_dims {
            return Err(Error::ShapeMismatch(format!(
                "({}|{})x({}|{}) is not square",
                self.row_dims.even, self.row_dims.odd, self.col_dims.even, self.col_dims.odd
            )));
        }
        Ok(())
    }

    /// Two-sided inverse from the block formula around an invertible `A`.
    pub fn inverse(&self) -> Result<Self> {
        self.check_square()?;
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let a_inv = a.try_inverse()?;
        let schur = d - &(&c * &a_inv) * &b;
        let s_inv = schur.try_inverse()?;
        let a_inv_b = &a_inv * &b;
        let c_a_inv = &c * &a_inv;
        let top_left = a_inv.clone() + &(&a_inv_b * &s_inv) * &c_a_inv;
        let top_right = -(&a_inv_b * &s_inv);
        let bottom_left = -(&s_inv * &c_a_inv);
        SuperMatrix::from_blocks(top_left, top_right, bottom_left, s_inv)
    }
}

/// Berezinian. Uses `D` when it is invertible and `A` otherwise.
pub fn ber<R: Ring>(m: &SuperMatrix<R>) -> Result<GrassmannElt<R>> {
    m.check_square()?;
    let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
    if let Ok(d_inv) = d.try_inverse() {
        let schur = a - &(&b * &d_inv) * &c;
        let num = schur.det()?;
        let den = d.det()?.invert()?;
        return Ok(num * den);
    }
    if let Ok(a_inv) = a.try_inverse() {
        let schur = d - &(&c * &a_inv) * &b;
        let den = schur.det()?.invert()?;
        return Ok(a.det()? * den);
    }
    Err(Error::NotInvertible)
}

pub fn supermat_mul<R: Ring>(m: &SuperMatrix<R>, n: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
    m.try_mul(n)
}

/// Lifts a rational matrix to constant Grassmann entries of the given shape.
pub fn constant_matrix<R: Ring>(shape: Shape, m: &Matrix<R>) -> Matrix<GrassmannElt<R>> {
    m.map(|x| GrassmannElt::constant(shape, x.clone()))
}

/// Inverse of a matrix whose reduction mod nilpotents is invertible, for
/// entries of any parity: `(M0 + N)^{-1} = sum_k (-M0^{-1} N)^k M0^{-1}`,
/// which terminates because `N` has nilpotent entries.
pub fn grassmann_inverse<R: Field>(m: &Matrix<GrassmannElt<R>>) -> Result<Matrix<GrassmannElt<R>>> {
    let m0 = m.map(|x| x.constant_term());
    let m0_inv = m0.try_inverse()?.map(|x| GrassmannElt::scalar(x.clone()));
    let n = m.map(|x| x.nilpotent_part());
    let step = -(&m0_inv * &n);
    let mut sum = Matrix::identity(m.rows());
    let mut power = sum.clone();
    loop {
        power = &power * &step;
        if power.is_zero() {
            break;
        }
        sum = sum + power.clone();
    }
    Ok(&sum * &m0_inv)
}

/// Indices of rows forming a maximal independent set, first-come.
pub fn independent_rows<F: Field>(m: &Matrix<F>) -> Vec<usize> {
    m.transpose().rref().1
}
