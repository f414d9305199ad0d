//! Functions on the affine hyperelliptic curve `x^2 = P(t)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::scalar::Rational;

type P = Poly<Rational>;
type R = RatFun<Rational>;

/// `even_part + odd_part * x`, reduced with `x^2 = modulus`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveFun {
    even_part: R,
    odd_part: R,
    modulus: P,
}

/// Rejects moduli with repeated roots.
pub fn check_squarefree(p: &P) -> Result<()> {
    if p.degree().is_none_or(|d| d == 0) {
        return Err(Error::NotSquarefree);
    }
    if p.gcd(&p.derivative()).is_one() {
        Ok(())
    } else {
        Err(Error::NotSquarefree)
    }
}

impl CurveFun {
    pub fn new(even_part: R, odd_part: R, modulus: P) -> Result<Self> {
        check_squarefree(&modulus)?;
        Ok(CurveFun { even_part, odd_part, modulus })
    }

    pub fn from_poly(p: P, modulus: P) -> Result<Self> {
        CurveFun::new(R::from_poly(p), R::zero(), modulus)
    }

    /// The coordinate function `x`.
    pub fn x(modulus: P) -> Result<Self> {
        CurveFun::new(R::zero(), R::one(), modulus)
    }

    pub fn even_part(&self) -> &R {
        &self.even_part
    }

    pub fn odd_part(&self) -> &R {
        &self.odd_part
    }

    pub fn modulus(&self) -> &P {
        &self.modulus
    }

    /// Hyperelliptic involution `x -> -x`.
    pub fn involution(&self) -> Self {
        CurveFun {
            even_part: self.even_part.clone(),
            odd_part: -self.odd_part.clone(),
            modulus: self.modulus.clone(),
        }
    }

    fn same_curve(&self, other: &Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_curve(other)?;
        Ok(CurveFun {
            even_part: self.even_part.clone() + other.even_part.clone(),
            odd_part: self.odd_part.clone() + other.odd_part.clone(),
            modulus: self.modulus.clone(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_curve(other)?;
        let p = R::from_poly(self.modulus.clone());
        let (a, b) = (self.even_part.clone(), self.odd_part.clone());
        let (c, d) = (other.even_part.clone(), other.odd_part.clone());
        Ok(CurveFun {
            even_part: a.clone() * c.clone() + b.clone() * d.clone() * p,
            odd_part: a * d + b * c,
            modulus: self.modulus.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.even_part.is_zero() && self.odd_part.is_zero()
    }
}

pub fn curvefun_mul(f: &CurveFun, g: &CurveFun) -> Result<CurveFun> {
    f.try_mul(g)
}

// Operator forms panic on modulus mismatch; use `try_*` when mixing curves.
impl Add for CurveFun {
    type Output = CurveFun;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("modulus mismatch")
    }
}

impl Neg for CurveFun {
    type Output = CurveFun;
    fn neg(self) -> Self {
        CurveFun { even_part: -self.even_part, odd_part: -self.odd_part, modulus: self.modulus }
    }
}

impl Sub for CurveFun {
    type Output = CurveFun;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for CurveFun {
    type Output = CurveFun;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("modulus mismatch")
    }
}
