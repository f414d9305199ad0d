//! Local superconformal coordinate changes of `(z | θ)` over a Grassmann base.
//!
//! Functions are `a0(z) + θ a1(z)` with `a0, a1` in `Λ ⊗ Q[z]` ([`SuperFn`]).
//! Moving a coefficient past `θ` applies the parity involution, so
//! `(a0 + θ a1)(b0 + θ b1) = a0 b0 + θ (ã0 b1 + a1 b0)`.
//!
//! One-forms are written `dz·A + dθ·B` with coefficients on the right, `dz`
//! odd and `dθ` even, and `dF = dz ∂_z F + dθ ∂_θ F`. A map `g` is
//! superconformal when `g*(dz - θ dθ) = (dz - θ dθ) λ`.
//!
//! Text form grammar (whitespace ignored):
//!
//! ```text
//! expr   = term { ("+" | "-") term } ;
//! term   = unary { "*" unary } ;
//! unary  = "-" unary | power ;
//! power  = atom [ "^" natural ] ;
//! atom   = natural [ "/" natural ] | "z" | "θ" | "theta"
//!        | ("η" | "eta") natural | "(" expr ")" ;
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::grassmann::{Blade, GrassmannElt, Shape};
use crate::poly::Poly;
use crate::scalar::{format_rational, int, one_half, QAlgebra, Rational};

/// Grassmann elements with polynomial-in-`z` coefficients.
pub type ZSeries = GrassmannElt<Poly<Rational>>;

pub const DEFAULT_DEGREE_CAP: usize = 24;

pub fn z_derivative(a: &ZSeries) -> ZSeries {
    a.map_coeffs(|p| p.derivative())
}

pub fn z_degree(a: &ZSeries) -> usize {
    a.terms().values().filter_map(|p| p.degree()).max().unwrap_or(0)
}

/// `z` itself, as a shape-less series.
pub fn z_series() -> ZSeries {
    ZSeries::scalar(Poly::var())
}

// Coefficients of z^k as Grassmann constants inside ZSeries.
fn z_coefficients(a: &ZSeries) -> Vec<ZSeries> {
    let d = z_degree(a);
    (0..=d)
        .map(|k| {
            let terms = a.terms().iter().map(|(b, p)| (*b, Poly::constant(p.coeff(k))));
            match a.shape() {
                Some(s) => ZSeries::from_terms(s, terms),
                None => ZSeries::scalar(Poly::constant(a.constant_term().coeff(k))),
            }
        })
        .collect()
}

/// `a0(z) + θ a1(z)`.
#[derive(Clone, PartialEq, Debug)]
pub struct SuperFn {
    pub base: ZSeries,
    pub theta: ZSeries,
}

impl SuperFn {
    pub fn new(base: ZSeries, theta: ZSeries) -> Self {
        SuperFn { base, theta }
    }

    pub fn from_base(base: ZSeries) -> Self {
        SuperFn { base, theta: ZSeries::zero() }
    }

    pub fn z() -> Self {
        SuperFn::from_base(z_series())
    }

    pub fn theta_var() -> Self {
        SuperFn { base: ZSeries::zero(), theta: ZSeries::one() }
    }

    pub fn constant(c: ZSeries) -> Self {
        SuperFn::from_base(c)
    }

    pub fn is_even(&self) -> bool {
        self.base.is_even() && self.theta.is_odd()
    }

    pub fn is_odd(&self) -> bool {
        self.base.is_odd() && self.theta.is_even()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.theta.is_zero()
    }

    /// `∂_z`, componentwise.
    pub fn dz(&self) -> Self {
        SuperFn { base: z_derivative(&self.base), theta: z_derivative(&self.theta) }
    }

    /// Left derivative `∂_θ`.
    pub fn dtheta(&self) -> Self {
        SuperFn::from_base(self.theta.clone())
    }

    pub fn degree(&self) -> usize {
        z_degree(&self.base).max(z_degree(&self.theta))
    }

    fn check_cap(self, cap: usize) -> Result<Self> {
        let d = self.degree();
        if d > cap {
            Err(Error::DegreeOverflow(d, cap))
        } else {
            Ok(self)
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        SuperFn { base: self.base.scale(q), theta: self.theta.scale(q) }
    }

    /// Substitutes `z -> zz`, `θ -> tt` (with `zz` even and `tt` odd).
    pub fn substitute(&self, zz: &SuperFn, tt: &SuperFn, cap: usize) -> Result<Self> {
        let a0 = eval_in(&self.base, zz, cap)?;
        let a1 = eval_in(&self.theta, zz, cap)?;
        (a0 + tt.clone() * a1).check_cap(cap)
    }

    /// Parses the text form in the given shape.
    pub fn parse(text: &str, shape: Shape) -> Result<Self> {
        Parser::new(text, shape).parse_all()
    }
}

// a(Z) by Horner, where `a` has Grassmann-constant coefficients per z-power.
fn eval_in(a: &ZSeries, zz: &SuperFn, cap: usize) -> Result<SuperFn> {
    let cs = z_coefficients(a);
    let mut acc = SuperFn::from_base(ZSeries::zero());
    for c in cs.into_iter().rev() {
        acc = (acc * zz.clone() + SuperFn::constant(c)).check_cap(cap)?;
    }
    Ok(acc)
}

impl Add for SuperFn {
    type Output = SuperFn;
    fn add(self, rhs: SuperFn) -> SuperFn {
        SuperFn { base: self.base + rhs.base, theta: self.theta + rhs.theta }
    }
}

impl Neg for SuperFn {
    type Output = SuperFn;
    fn neg(self) -> SuperFn {
        SuperFn { base: -self.base, theta: -self.theta }
    }
}

impl Sub for SuperFn {
    type Output = SuperFn;
    fn sub(self, rhs: SuperFn) -> SuperFn {
        self + (-rhs)
    }
}

impl Mul for SuperFn {
    type Output = SuperFn;
    fn mul(self, rhs: SuperFn) -> SuperFn {
        let base = self.base.clone() * rhs.base.clone();
        let theta = self.base.involution() * rhs.theta + self.theta * rhs.base;
        SuperFn { base, theta }
    }
}

/// `dz·A + dθ·B`.
#[derive(Clone, PartialEq, Debug)]
pub struct OneForm {
    pub dz: SuperFn,
    pub dtheta: SuperFn,
}

/// `dF`.
pub fn differential(f: &SuperFn) -> OneForm {
    OneForm { dz: f.dz(), dtheta: f.dtheta() }
}

/// `H dF`, moving `H` to the right of the differentials.
fn left_mul(h: &SuperFn, w: &OneForm) -> OneForm {
    // H dz = (-1)^{p(H)} dz H since dz is odd; dθ is even
    let sign_dz = if h.is_odd() { -h.clone() } else { h.clone() };
    OneForm { dz: sign_dz * w.dz.clone(), dtheta: h.clone() * w.dtheta.clone() }
}

/// Coordinate map `z -> z_image`, `θ -> theta_image`, reducing to the
/// identity modulo nilpotents.
#[derive(Clone, PartialEq, Debug)]
pub struct SuperCoordMap {
    pub z_image: SuperFn,
    pub theta_image: SuperFn,
    pub cap: usize,
}

impl SuperCoordMap {
    pub fn new(z_image: SuperFn, theta_image: SuperFn, cap: usize) -> Result<Self> {
        if !z_image.is_even() {
            return Err(Error::InvalidInput("z image must be even".into()));
        }
        if !theta_image.is_odd() {
            return Err(Error::NotOdd);
        }
        let reduced_z = (z_image.base.constant_term(), z_image.theta.constant_term());
        let reduced_t = (theta_image.base.constant_term(), theta_image.theta.constant_term());
        if reduced_z != (Poly::var(), Poly::zero()) || reduced_t != (Poly::zero(), Poly::one()) {
            return Err(Error::InvalidInput("map does not reduce to the identity".into()));
        }
        let m = SuperCoordMap { z_image, theta_image, cap };
        let d = m.z_image.degree().max(m.theta_image.degree());
        if d > cap {
            return Err(Error::DegreeOverflow(d, cap));
        }
        Ok(m)
    }

    pub fn identity(cap: usize) -> Self {
        SuperCoordMap { z_image: SuperFn::z(), theta_image: SuperFn::theta_var(), cap }
    }

    /// `g* F`.
    pub fn pullback(&self, f: &SuperFn) -> Result<SuperFn> {
        f.substitute(&self.z_image, &self.theta_image, self.cap)
    }

    pub fn pullback_one_form(&self, w: &OneForm) -> Result<OneForm> {
        // g*(dz A + dθ B) = d(g*z) g*A + d(g*θ) g*B
        let a = self.pullback(&w.dz)?;
        let b = self.pullback(&w.dtheta)?;
        let dz_img = differential(&self.z_image);
        let dt_img = differential(&self.theta_image);
        Ok(OneForm {
            dz: dz_img.dz * a.clone() + dt_img.dz * b.clone(),
            dtheta: dz_img.dtheta * a + dt_img.dtheta * b,
        })
    }
}

/// `S_f`: `z -> f`, `θ -> sqrt(f') θ`.
pub fn make_s(f: &ZSeries, cap: usize) -> Result<SuperCoordMap> {
    if !f.is_even() || f.constant_term() != Poly::var() {
        return Err(Error::NotUnipotentDerivative);
    }
    let root = z_derivative(f).sqrt_unipotent().map_err(|_| Error::NotUnipotentDerivative)?;
    SuperCoordMap::new(SuperFn::from_base(f.clone()), SuperFn::new(ZSeries::zero(), root), cap)
}

/// `T_φ`: `z -> z + θ φ`, `θ -> φ + θ (1 + φ φ' / 2)`.
pub fn make_t(phi: &ZSeries, cap: usize) -> Result<SuperCoordMap> {
    if !phi.is_odd() {
        return Err(Error::NotOdd);
    }
    let q = phi.clone() * z_derivative(phi);
    let h1 = ZSeries::one() + q.scale(&one_half());
    SuperCoordMap::new(SuperFn::new(z_series(), phi.clone()), SuperFn::new(phi.clone(), h1), cap)
}

/// `g ∘ h`: the images of `g` with the images of `h` substituted in, so that
/// `compose(S_f, T_φ)` sends `z` to `f(z) + θ f'(z) φ(z)`.
pub fn compose(g: &SuperCoordMap, h: &SuperCoordMap) -> Result<SuperCoordMap> {
    let cap = g.cap.max(h.cap);
    let h = SuperCoordMap { cap, ..h.clone() };
    SuperCoordMap::new(h.pullback(&g.z_image)?, h.pullback(&g.theta_image)?, cap)
}

/// Result of pulling back `dz - θ dθ`.
#[derive(Clone, Debug)]
pub struct PullbackReport {
    pub form: OneForm,
    /// `dz` coefficient of the pullback, the factor whenever `ok`.
    pub lambda: SuperFn,
    pub ok: bool,
    /// `g0' + h0 h0' + 2θ h0 h1'`, the expected closed form, compared but not enforced.
    pub quoted_lambda: SuperFn,
    pub quoted_matches: bool,
}

/// `ω = dz - θ dθ = dz·1 - dθ·θ`.
pub fn contact_form() -> OneForm {
    OneForm { dz: SuperFn::constant(ZSeries::one()), dtheta: -SuperFn::theta_var() }
}

pub fn pullback_form(g: &SuperCoordMap) -> Result<PullbackReport> {
    let w = contact_form();
    let dz_img = differential(&g.z_image);
    let h_dh = left_mul(&g.theta_image, &differential(&g.theta_image));
    let form = OneForm { dz: dz_img.dz - h_dh.dz, dtheta: dz_img.dtheta - h_dh.dtheta };
    debug_assert_eq!(Ok(form.clone()), g.pullback_one_form(&w));
    let lambda = form.dz.clone();
    let ok = form.dtheta == -(SuperFn::theta_var() * lambda.clone());
    let (g0, h0, h1) = (&g.z_image.base, &g.theta_image.base, &g.theta_image.theta);
    let quoted_lambda = SuperFn::new(
        z_derivative(g0) + h0.clone() * z_derivative(h0),
        (h0.clone() * z_derivative(h1)).scale(&int(2)),
    );
    let quoted_matches = quoted_lambda == lambda;
    Ok(PullbackReport { form, lambda, ok, quoted_lambda, quoted_matches })
}

/// The unique `(f, φ)` with `g = S_f ∘ T_φ`.
pub fn factorize(g: &SuperCoordMap) -> Result<(ZSeries, ZSeries)> {
    if !pullback_form(g)?.ok {
        return Err(Error::NotSuperconformal);
    }
    let f = g.z_image.base.clone();
    let fprime_inv = z_derivative(&f).invert().map_err(|_| Error::NotSuperconformal)?;
    let phi = fprime_inv * g.z_image.theta.clone();
    let back = compose(&make_s(&f, g.cap)?, &make_t(&phi, g.cap)?)?;
    if back.z_image != g.z_image || back.theta_image != g.theta_image {
        return Err(Error::NotSuperconformal);
    }
    Ok((f, phi))
}

/// `f' g - f g'`.
pub fn w_form(f: &ZSeries, g: &ZSeries) -> ZSeries {
    z_derivative(f) * g.clone() - f.clone() * z_derivative(g)
}

pub fn w_form_poly(f: &Poly<Rational>, g: &Poly<Rational>) -> Poly<Rational> {
    f.derivative() * g.clone() - f.clone() * g.derivative()
}

/// `a(u(z))` for a purely even `u`.
pub fn substitute_z(a: &ZSeries, u: &ZSeries, cap: usize) -> Result<ZSeries> {
    let v = eval_in(a, &SuperFn::from_base(u.clone()), cap)?;
    Ok(v.base)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    shape: Shape,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, shape: Shape) -> Self {
        Parser { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, shape, _src: src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let ws: Vec<char> = w.chars().collect();
        if self.chars[self.pos..].starts_with(&ws) {
            self.pos += ws.len();
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {}", self.pos))
    }

    fn parse_all(mut self) -> Result<SuperFn> {
        let e = self.expr()?;
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<SuperFn> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') || self.eat('−') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SuperFn> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SuperFn> {
        if self.eat('-') || self.eat('−') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<SuperFn> {
        let base = self.atom()?;
        if self.eat('^') {
            let n = self.natural()?;
            let mut acc = SuperFn::constant(ZSeries::one());
            for _ in 0..n {
                acc = acc * base.clone();
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("number too large"))
    }

    fn atom(&mut self) -> Result<SuperFn> {
        if self.eat('(') {
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(e);
        }
        if self.eat('z') {
            return Ok(SuperFn::z());
        }
        if self.eat_word("theta") || self.eat('θ') {
            return Ok(SuperFn::theta_var());
        }
        if self.eat_word("eta") || self.eat('η') {
            let i = self.natural()?;
            if i == 0 || i > self.shape.generators {
                return Err(self.err("generator index out of range"));
            }
            return Ok(SuperFn::constant(ZSeries::generator(self.shape, i - 1)));
        }
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = self.natural()?;
            let mut q = Rational::from_integer(n.into());
            if self.eat('/') {
                let d = self.natural()?;
                if d == 0 {
                    return Err(self.err("zero denominator"));
                }
                q /= Rational::from_integer(d.into());
            }
            return Ok(SuperFn::constant(ZSeries::constant(self.shape, Poly::constant(q))));
        }
        Err(self.err("unexpected character"))
    }
}

fn monomial_text(coeff: &Rational, blade: Blade, k: usize, theta: bool) -> (bool, String) {
    let mut factors = Vec::new();
    let a = coeff.abs();
    if theta {
        factors.push("θ".to_string());
    }
    factors.extend(blade.indices().iter().map(|i| format!("η{}", i + 1)));
    match k {
        0 => {}
        1 => factors.push("z".into()),
        _ => factors.push(format!("z^{k}")),
    }
    if !a.is_one() || factors.is_empty() {
        factors.insert(0, format_rational(&a));
    }
    (coeff.is_negative(), factors.join("*"))
}

// Text form accepted by `SuperFn::parse`.
impl fmt::Display for SuperFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (theta, part) in [(false, &self.base), (true, &self.theta)] {
            for (b, p) in part.terms() {
                for (k, c) in p.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        parts.push(monomial_text(c, *b, k, theta));
                    }
                }
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        for (i, (neg, text)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => f.write_str(text)?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}
