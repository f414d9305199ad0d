//! Reduced quotients of polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Field, Rational, Ring};

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFun<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFun<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        let lead = den.leading().ok_or(Error::NotInvertible)?.clone();
        if num.is_zero() {
            return Ok(RatFun { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let inv = F::one() / lead;
        Ok(RatFun { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// The polynomial this equals, or `NotDivisible`.
    pub fn to_poly(&self) -> Result<Poly<F>> {
        if self.is_poly() {
            Ok(self.num.clone())
        } else {
            Err(Error::NotDivisible)
        }
    }

    pub fn eval(&self, t0: &F) -> Result<F> {
        let d = self.den.eval(t0);
        if d.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(self.num.eval(t0) / d)
    }

    pub fn recip(&self) -> Result<Self> {
        RatFun::new(self.den.clone(), self.num.clone())
    }
}

impl<F: Field> Add for RatFun<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let num = self.num * rhs.den.clone() + rhs.num * self.den.clone();
        RatFun::new(num, self.den * rhs.den).expect("nonzero denominators")
    }
}

impl<F: Field> Neg for RatFun<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFun { num: -self.num, den: self.den }
    }
}

impl<F: Field> Sub for RatFun<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for RatFun<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        RatFun::new(self.num * rhs.num, self.den * rhs.den).expect("nonzero denominators")
    }
}

impl<F: Field> Div for RatFun<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip().expect("division by zero rational function")
    }
}

impl<F: Field> Zero for RatFun<F> {
    fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RatFun<F> {
    fn one() -> Self {
        RatFun { num: Poly::one(), den: Poly::one() }
    }
}

impl<F: Field> Ring for RatFun<F> {
    fn try_inv(&self) -> Option<Self> {
        self.recip().ok()
    }
}

impl<F: Field> Field for RatFun<F> {}

impl fmt::Display for RatFun<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
