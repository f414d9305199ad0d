//! Dense univariate polynomials, lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, parse_rational, Field, QAlgebra, Rational, Ring};

/// A polynomial with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::monomial(R::one(), 1)
    }

    /// `prod (t - r)` over the given roots.
    pub fn from_roots(roots: &[R]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            acc * Poly::new(vec![-r.clone(), R::one()])
        })
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// `None` for the zero polynomial, which has degree "minus infinity".
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation.
    pub fn eval(&self, t0: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * t0.clone() + c.clone())
    }

    /// `self(other(t))`
    pub fn compose(&self, other: &Poly<R>) -> Poly<R> {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc * other.clone() + Poly::constant(c.clone()))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| c.clone() * a.clone()).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![R::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }
}

impl<R: QAlgebra> Poly<R> {
    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&int(k as i64)))
                .collect(),
        )
    }
}

impl<F: Field> Poly<F> {
    /// Euclidean division: `self = q * den + r` with `deg r < deg den`.
    pub fn div_rem(&self, den: &Poly<F>) -> Result<(Poly<F>, Poly<F>)> {
        let dlead = den.leading().ok_or(Error::NotInvertible)?.clone();
        let dd = den.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / dlead.clone();
            if !c.is_zero() {
                for (i, d) in den.coeffs.iter().enumerate() {
                    rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient; `NotDivisible` when the remainder is nonzero.
    pub fn div_exact(&self, den: &Poly<F>) -> Result<Poly<F>> {
        let (q, r) = self.div_rem(den)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    pub fn monic(&self) -> Poly<F> {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = F::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Free function form of [`Poly::eval`].
pub fn poly_eval<R: Ring>(p: &Poly<R>, t0: &R) -> R {
    p.eval(t0)
}

pub fn poly_derivative<R: QAlgebra>(p: &Poly<R>) -> Poly<R> {
    p.derivative()
}

pub fn poly_divexact<F: Field>(num: &Poly<F>, den: &Poly<F>) -> Result<Poly<F>> {
    num.div_exact(den)
}

impl<R: Ring> Add for Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Poly::new(long)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Self {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Poly::constant(R::one())
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn try_inv(&self) -> Option<Self> {
        if self.coeffs.len() == 1 {
            self.coeffs[0].try_inv().map(Poly::constant)
        } else {
            None
        }
    }
}

impl<R: QAlgebra> QAlgebra for Poly<R> {
    fn from_rational(q: &Rational) -> Self {
        Poly::constant(R::from_rational(q))
    }

    fn scale(&self, q: &Rational) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.scale(q)).collect())
    }
}

impl<R: Ring> crate::scalar::Graded for Poly<R> {
    fn is_even_elt(&self) -> bool {
        true
    }
}

impl Poly<Rational> {
    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| int(c)).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(v: &[S]) -> Result<Self> {
        let cs = v.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(cs))
    }

    /// Human-readable form in the named variable, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        use num_traits::Signed;
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&format_rational(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{mono}", format_rational(&a)));
            }
        }
        out
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

impl Serialize for Poly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        Poly::from_strings(&v).map_err(serde::de::Error::custom)
    }
}
