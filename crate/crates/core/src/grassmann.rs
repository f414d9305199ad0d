//! Truncated Grassmann algebras `Λ(η_1, ..., η_m) / Λ^{≥k}`.
//!
//! # Sign convention
//!
//! A basis monomial is `η_I = η_{i_1} η_{i_2} ... η_{i_r}` with
//! `i_1 < i_2 < ... < i_r`, stored as a bit mask ([`Blade`]). For disjoint
//! `I`, `J` the product is `η_I η_J = (-1)^{N(I,J)} η_{I ∪ J}` where
//! `N(I,J)` counts pairs `(i, j) ∈ I × J` with `i > j`, i.e. the number of
//! transpositions needed to sort the concatenated word. Overlapping masks
//! multiply to zero. Every sign in the crate (supermatrix products,
//! Berezinians, pairings, superconformal pullbacks) descends from
//! [`Blade::mul_sign`]; nothing else hard-codes a Koszul sign.
//!
//! The coefficient ring `R` must be commutative. Elements carry their shape
//! (`m`, `k`); the shape-less constants produced by `Zero`/`One` adopt the
//! shape of whatever they are combined with, so generic matrix code can use
//! `R::zero()` and `R::one()` freely.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{format_rational, half_binomial, Graded, QAlgebra, Rational, Ring};

/// Strictly increasing generator subset, as a bit mask (bit `i` = `η_{i+1}`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Blade(pub u64);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_indices(indices: &[usize]) -> Option<(Blade, bool)> {
        // returns (blade, negative) after sorting; None if an index repeats
        let mut mask = Blade(0);
        let mut negative = false;
        for &i in indices {
            let b = Blade(1u64 << i);
            if mask.0 & b.0 != 0 {
                return None;
            }
            if mask.mul_sign(b) {
                negative = !negative;
            }
            mask = Blade(mask.0 | b.0);
        }
        Some((mask, negative))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_even(self) -> bool {
        self.grade() % 2 == 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    /// `true` when `η_self η_other = -η_{self ∪ other}`. Only meaningful for
    /// disjoint blades.
    pub fn mul_sign(self, other: Blade) -> bool {
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            let above = if j >= 63 { 0 } else { self.0 >> (j + 1) };
            swaps += above.count_ones();
            rest &= rest - 1;
        }
        swaps % 2 == 1
    }
}

/// Number of generators and truncation degree.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Shape {
    pub generators: usize,
    /// Terms with at least this many generators are dropped.
    pub truncation: usize,
}

impl Shape {
    pub fn new(generators: usize, truncation: usize) -> Self {
        assert!(generators <= 64, "at most 64 odd generators");
        Shape { generators, truncation }
    }

    /// No truncation beyond the exterior algebra itself.
    pub fn full(generators: usize) -> Self {
        Shape::new(generators, generators + 1)
    }
}

/// Even or odd.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_grade(g: usize) -> Parity {
        if g % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// An element of a truncated Grassmann algebra with coefficients in `R`.
#[derive(Clone, Debug)]
pub struct GrassmannElt<R> {
    shape: Option<Shape>,
    terms: BTreeMap<Blade, R>,
}

// A shape-less constant equals the same constant in any shape.
impl<R: PartialEq> PartialEq for GrassmannElt<R> {
    fn eq(&self, other: &Self) -> bool {
        let shapes_agree = match (self.shape, other.shape) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        };
        shapes_agree && self.terms == other.terms
    }
}

impl<R: Ring> GrassmannElt<R> {
    pub fn zero_in(shape: Shape) -> Self {
        GrassmannElt { shape: Some(shape), terms: BTreeMap::new() }
    }

    /// A constant that adopts the shape of whatever it meets.
    pub fn scalar(c: R) -> Self {
        let mut e = GrassmannElt { shape: None, terms: BTreeMap::new() };
        e.insert(Blade::EMPTY, c);
        e
    }

    pub fn constant(shape: Shape, c: R) -> Self {
        let mut e = GrassmannElt::zero_in(shape);
        e.insert(Blade::EMPTY, c);
        e
    }

    /// The generator `η_{i+1}` (zero-based `i`).
    pub fn generator(shape: Shape, i: usize) -> Self {
        assert!(i < shape.generators, "generator index out of range");
        let mut e = GrassmannElt::zero_in(shape);
        e.insert(Blade(1 << i), R::one());
        e
    }

    /// `c * η_{i_1} ... η_{i_r}` in the given (not necessarily sorted) order.
    pub fn monomial(shape: Shape, indices: &[usize], c: R) -> Self {
        let mut e = GrassmannElt::zero_in(shape);
        if indices.iter().any(|&i| i >= shape.generators) {
            panic!("generator index out of range");
        }
        if let Some((blade, neg)) = Blade::from_indices(indices) {
            e.insert(blade, if neg { -c } else { c });
        }
        e
    }

    pub fn from_terms(shape: Shape, terms: impl IntoIterator<Item = (Blade, R)>) -> Self {
        let mut e = GrassmannElt::zero_in(shape);
        for (b, c) in terms {
            assert!(b.0 >> shape.generators == 0, "blade uses undeclared generators");
            let cur = e.terms.remove(&b).unwrap_or_else(R::zero);
            e.insert(b, cur + c);
        }
        e
    }

    fn insert(&mut self, b: Blade, c: R) {
        let keep = match self.shape {
            Some(s) => b.grade() < s.truncation,
            None => b == Blade::EMPTY,
        };
        if keep && !c.is_zero() {
            self.terms.insert(b, c);
        }
    }

    pub fn shape(&self) -> Option<Shape> {
        self.shape
    }

    pub fn terms(&self) -> &BTreeMap<Blade, R> {
        &self.terms
    }

    pub fn coeff(&self, b: Blade) -> R {
        self.terms.get(&b).cloned().unwrap_or_else(R::zero)
    }

    /// Coefficient of the empty monomial (the reduction mod nilpotents).
    pub fn constant_term(&self) -> R {
        self.coeff(Blade::EMPTY)
    }

    pub fn nilpotent_part(&self) -> Self {
        let mut e = self.clone();
        e.terms.remove(&Blade::EMPTY);
        e
    }

    /// `(even, odd)` with `self = even + odd`.
    pub fn parity_split(&self) -> (Self, Self) {
        let (ev, od): (BTreeMap<_, _>, BTreeMap<_, _>) =
            self.terms.iter().map(|(b, c)| (*b, c.clone())).partition(|(b, _)| b.is_even());
        (
            GrassmannElt { shape: self.shape, terms: ev },
            GrassmannElt { shape: self.shape, terms: od },
        )
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|b| b.is_even())
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|b| !b.is_even())
    }

    /// `Some(p)` when homogeneous (zero counts as both; reported even).
    pub fn parity(&self) -> Option<Parity> {
        if self.is_even() {
            Some(Parity::Even)
        } else if self.is_odd() {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        match p {
            Parity::Even => self.is_even(),
            Parity::Odd => self.is_odd(),
        }
    }

    /// Parity involution: negates the odd part.
    pub fn involution(&self) -> Self {
        GrassmannElt {
            shape: self.shape,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| (*b, if b.is_even() { c.clone() } else { -c.clone() }))
                .collect(),
        }
    }

    /// Smallest generator degree present; `None` stands for the zero element.
    pub fn nilpotent_order(&self) -> Option<usize> {
        self.terms.keys().map(|b| b.grade()).min()
    }

    /// Parts of generator degree exactly `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        GrassmannElt {
            shape: self.shape,
            terms: self.terms.iter().filter(|(b, _)| b.grade() == d).map(|(b, c)| (*b, c.clone())).collect(),
        }
    }

    /// Drops all terms of generator degree `>= k` (and records the new truncation).
    pub fn truncate(&self, k: usize) -> Self {
        let shape = self.shape.map(|s| Shape::new(s.generators, k.min(s.truncation)));
        GrassmannElt {
            shape,
            terms: self.terms.iter().filter(|(b, _)| b.grade() < k).map(|(b, c)| (*b, c.clone())).collect(),
        }
    }

    /// Same terms viewed inside a larger shape.
    pub fn reshape(&self, shape: Shape) -> Self {
        GrassmannElt::from_terms(shape, self.terms.iter().map(|(b, c)| (*b, c.clone())))
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> GrassmannElt<S> {
        let mut out = GrassmannElt { shape: self.shape, terms: BTreeMap::new() };
        for (b, c) in &self.terms {
            out.insert(*b, f(c));
        }
        out
    }

    pub fn scale_coeff(&self, c: &R) -> Self {
        self.map_coeffs(|a| c.clone() * a.clone())
    }

    fn merged_shape(&self, other: &Self) -> Result<Option<Shape>> {
        match (self.shape, other.shape) {
            (Some(a), Some(b)) if a != b => Err(Error::ShapeMismatch(format!("{a:?} vs {b:?}"))),
            (Some(a), _) => Ok(Some(a)),
            (None, s) => Ok(s),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let shape = self.merged_shape(other)?;
        let mut out = GrassmannElt { shape, terms: self.terms.clone() };
        for (b, c) in &other.terms {
            let cur = out.terms.remove(b).unwrap_or_else(R::zero);
            out.insert(*b, cur + c.clone());
        }
        Ok(out)
    }

    /// Supercommutative product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let shape = self.merged_shape(other)?;
        let mut out = GrassmannElt { shape, terms: BTreeMap::new() };
        let limit = shape.map_or(1, |s| s.truncation);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.0 & b.0 != 0 || a.grade() + b.grade() >= limit {
                    continue;
                }
                let blade = Blade(a.0 | b.0);
                let prod = ca.clone() * cb.clone();
                let prod = if a.mul_sign(*b) { -prod } else { prod };
                let cur = out.terms.remove(&blade).unwrap_or_else(R::zero);
                out.insert(blade, cur + prod);
            }
        }
        Ok(out)
    }

    /// Inverse through the terminating geometric series in the nilpotent part.
    pub fn invert(&self) -> Result<Self> {
        let c_inv = self.constant_term().try_inv().ok_or(Error::NotInvertible)?;
        // self = c (1 + u), u = c^{-1} n
        let u = self.nilpotent_part().scale_coeff(&c_inv);
        let mut sum = GrassmannElt { shape: self.shape, terms: BTreeMap::new() };
        sum.insert(Blade::EMPTY, R::one());
        let mut power = sum.clone();
        loop {
            power = -(power * u.clone());
            if power.is_zero() {
                break;
            }
            sum = sum + power.clone();
        }
        Ok(sum.scale_coeff(&c_inv))
    }
}

impl<R: QAlgebra> GrassmannElt<R> {
    /// Square root of an even element with constant term 1, constant term 1.
    pub fn sqrt_unipotent(&self) -> Result<Self> {
        if !self.is_even() || !self.constant_term().is_one() {
            return Err(Error::NotUnipotent);
        }
        let n = self.nilpotent_part();
        let mut sum = GrassmannElt { shape: self.shape, terms: BTreeMap::new() };
        sum.insert(Blade::EMPTY, R::one());
        let mut power = sum.clone();
        let mut k = 0;
        loop {
            k += 1;
            power = power * n.clone();
            if power.is_zero() {
                break;
            }
            sum = sum + power.scale(&half_binomial(k));
        }
        Ok(sum)
    }
}

pub fn gr_mul<R: Ring>(a: &GrassmannElt<R>, b: &GrassmannElt<R>) -> Result<GrassmannElt<R>> {
    a.try_mul(b)
}

pub fn gr_parity_split<R: Ring>(a: &GrassmannElt<R>) -> (GrassmannElt<R>, GrassmannElt<R>) {
    a.parity_split()
}

pub fn gr_invert<R: Ring>(a: &GrassmannElt<R>) -> Result<GrassmannElt<R>> {
    a.invert()
}

pub fn gr_sqrt_unipotent<R: QAlgebra>(a: &GrassmannElt<R>) -> Result<GrassmannElt<R>> {
    a.sqrt_unipotent()
}

pub fn nilpotent_order<R: Ring>(a: &GrassmannElt<R>) -> Option<usize> {
    a.nilpotent_order()
}

// Operator forms panic on shape mismatch.
impl<R: Ring> Add for GrassmannElt<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("Grassmann shape mismatch")
    }
}

impl<R: Ring> Neg for GrassmannElt<R> {
    type Output = Self;
    fn neg(self) -> Self {
        GrassmannElt { shape: self.shape, terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect() }
    }
}

impl<R: Ring> Sub for GrassmannElt<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Mul for GrassmannElt<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("Grassmann shape mismatch")
    }
}

impl<R: Ring> Zero for GrassmannElt<R> {
    fn zero() -> Self {
        GrassmannElt { shape: None, terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Ring> One for GrassmannElt<R> {
    fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Blade::EMPTY, R::one());
        GrassmannElt { shape: None, terms }
    }
}

impl<R: Ring> Ring for GrassmannElt<R> {
    fn try_inv(&self) -> Option<Self> {
        self.invert().ok()
    }
}

impl<R: Ring> Graded for GrassmannElt<R> {
    fn is_even_elt(&self) -> bool {
        self.is_even()
    }
}

impl<R: QAlgebra> QAlgebra for GrassmannElt<R> {
    fn from_rational(q: &Rational) -> Self {
        let mut e = GrassmannElt { shape: None, terms: BTreeMap::new() };
        e.insert(Blade::EMPTY, R::from_rational(q));
        e
    }

    fn scale(&self, q: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(q))
    }
}

fn monomial_label(b: Blade) -> String {
    b.indices().iter().map(|i| format!("η{}", i + 1)).collect()
}

impl fmt::Display for GrassmannElt<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if *b == Blade::EMPTY {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                f.write_str(&monomial_label(*b))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), monomial_label(*b))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for GrassmannElt<Poly<Rational>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let p = c.display_in("z");
                if *b == Blade::EMPTY {
                    format!("({p})")
                } else {
                    format!("({p})*{}", monomial_label(*b))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
