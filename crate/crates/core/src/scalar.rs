//! Scalar traits shared by every algebraic container in the crate.
//!
//! Containers (`Poly`, `GrassmannElt`, `Matrix`, ...) are generic over a
//! [`Ring`]. Exact work uses [`Rational`]; `f64` is supported for quick
//! numerical experiments but equality there is bitwise, so the identities
//! checked in tests are only meaningful over the rationals.

use std::fmt;
use std::ops::{Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact fraction, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// An associative ring with unit. Multiplication need not be commutative
/// (Grassmann elements implement this trait), so algorithms that need
/// commutativity say so in their docs.
pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    /// Two-sided inverse, if `self` is a unit.
    fn try_inv(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        self.try_inv().is_some()
    }
}

/// A ring where every nonzero element is a unit.
pub trait Field: Ring + Div<Output = Self> {}

/// A ring containing the rationals, so binomial series and halves make sense.
pub trait QAlgebra: Ring {
    fn from_rational(q: &Rational) -> Self;

    fn scale(&self, q: &Rational) -> Self {
        Self::from_rational(q) * self.clone()
    }
}

impl Ring for Rational {
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Field for Rational {}

impl QAlgebra for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
}

impl Ring for f64 {
    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

impl Field for f64 {}

impl QAlgebra for f64 {
    fn from_rational(q: &Rational) -> Self {
        use num_traits::ToPrimitive;
        q.to_f64().unwrap_or(f64::NAN)
    }
}

/// Even/odd grading of ring elements. Ungraded rings are purely even.
pub trait Graded {
    fn is_even_elt(&self) -> bool;
}

impl Graded for Rational {
    fn is_even_elt(&self) -> bool {
        true
    }
}

impl Graded for f64 {
    fn is_even_elt(&self) -> bool {
        true
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let q = Rational::from_str(t).map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
    Ok(q)
}

/// Canonical `"p/q"` text (`"p"` when the denominator is 1).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn abs_numer_denom(q: &Rational) -> (BigInt, BigInt) {
    (q.numer().abs(), q.denom().clone())
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(format_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) fn one_half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

/// `binom(1/2, k)`, the coefficients of `sqrt(1 + x)`.
pub(crate) fn half_binomial(k: usize) -> Rational {
    let half = one_half();
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (half.clone() - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}
