//! Massey products on a hyperelliptic curve `x^2 = Π_{i=1}^{2g+1} (t - a_i)`
//! with the theta characteristic `O(p_1 + ... + p_g - p_0)` and the
//! differential `α = G dt/x`, `G = Π_{j=1}^{g-1} (t - b_j)`.
//!
//! Odd coordinates live on `V = V⁺ ⊕ V⁻` with basis `e_j⁺` and the rescaled
//! `ê_j⁻ = x_j e_j⁻`, where `x_j` is the value of `x` at the chosen point over
//! `b_j`. In that basis every matrix below has rational entries:
//!
//! * a section `(S + T·x/F)·dt/x` of `ω ⊗ L` restricts to
//!   `Σ_j S(b_j) e_j⁺ + T(b_j)/F(b_j) ê_j⁻`;
//! * the duality pairs `e_j⁺` with `ê_j⁻` with weight `2F(b_j)/G'(b_j)`.
//!
//! Flipping the sheet over `b_j` flips the sign of `ê_j⁻`; nothing here
//! depends on that choice beyond such signs.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::CurveFun;
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElt, Shape};
use crate::matrix::{rank_exact, Matrix};
use crate::pfaffian::SkewMatrix;
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::scalar::{format_rational, rational_vec, Rational};
use crate::second_variation::SubspaceFamily;

type P = Poly<Rational>;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HyperellipticConfig {
    pub g: usize,
    /// `2g + 1` branch values; the first `g` define `F`.
    #[serde(with = "rational_vec")]
    pub a: Vec<Rational>,
    /// `g - 1` zeros of the chosen differential.
    #[serde(with = "rational_vec")]
    pub b: Vec<Rational>,
}

pub fn validate_config(cfg: &HyperellipticConfig) -> Result<()> {
    let g = cfg.g;
    if g < 3 {
        return Err(Error::InvalidInput(format!("genus {g} is below 3")));
    }
    if cfg.a.len() != 2 * g + 1 || cfg.b.len() != g - 1 {
        return Err(Error::InvalidInput(format!(
            "genus {g} needs {} branch values and {} zeros, got {} and {}",
            2 * g + 1,
            g - 1,
            cfg.a.len(),
            cfg.b.len()
        )));
    }
    for list in [&cfg.a, &cfg.b] {
        for (i, x) in list.iter().enumerate() {
            if list[..i].contains(x) {
                return Err(Error::DuplicateBranch(format_rational(x)));
            }
        }
    }
    if let Some(x) = cfg.b.iter().find(|x| cfg.a.contains(x)) {
        return Err(Error::ZeroCollision(format_rational(x)));
    }
    Ok(())
}

impl HyperellipticConfig {
    pub fn new(g: usize, a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        let cfg = HyperellipticConfig { g, a, b };
        validate_config(&cfg)?;
        Ok(cfg)
    }

    /// Branch values `0, 1, ..., 2g` with the given zeros.
    pub fn with_zeros(g: usize, b: Vec<Rational>) -> Result<Self> {
        let mut a = Vec::with_capacity(2 * g + 1);
        let mut k = 0i64;
        while a.len() < 2 * g + 1 {
            let v = Rational::from_integer(k.into());
            if !b.contains(&v) {
                a.push(v);
            }
            k += 1;
        }
        HyperellipticConfig::new(g, a, b)
    }

    /// `Π_{i=1}^{2g+1} (t - a_i)`.
    pub fn branch_poly(&self) -> P {
        P::from_roots(&self.a)
    }

    /// `F = Π_{i=1}^{g} (t - a_i)`.
    pub fn f_poly(&self) -> P {
        P::from_roots(&self.a[..self.g])
    }

    /// `G = Π_j (t - b_j)`.
    pub fn g_poly(&self) -> P {
        P::from_roots(&self.b)
    }

    /// Lagrange basis `G_j` of degree `g - 2` with `G_j(b_k) = δ_jk`.
    pub fn lagrange_basis(&self) -> Vec<P> {
        let gp = self.g_poly().derivative();
        (0..self.b.len())
            .map(|j| {
                let others: Vec<Rational> =
                    self.b.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect();
                P::from_roots(&others).scale(&(Rational::one() / gp.eval(&self.b[j])))
            })
            .collect()
    }

    fn f_at(&self) -> Vec<Rational> {
        let f = self.f_poly();
        self.b.iter().map(|v| f.eval(v)).collect()
    }

    fn gprime_at(&self) -> Vec<Rational> {
        let gp = self.g_poly().derivative();
        self.b.iter().map(|v| gp.eval(v)).collect()
    }

    fn n(&self) -> usize {
        self.g - 1
    }
}

/// `t^m`, `m = 0..g-1`; the factor `dt/x` is implicit.
pub fn omega_basis(cfg: &HyperellipticConfig) -> Vec<P> {
    (0..cfg.g).map(|m| P::monomial(Rational::one(), m)).collect()
}

/// `ξ = Σ f_i ⊗ g_i` in the kernel of multiplication on `H^0(ω)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuadraticRelation {
    pub pairs: Vec<(P, P)>,
}

impl QuadraticRelation {
    pub fn new(pairs: Vec<(P, P)>) -> Result<Self> {
        let rel = QuadraticRelation { pairs };
        if !rel.product().is_zero() {
            return Err(Error::InvalidRelation(format!("Σ f_i g_i = {}", rel.product())));
        }
        Ok(rel)
    }

    pub fn zero() -> Self {
        QuadraticRelation { pairs: Vec::new() }
    }

    pub fn product(&self) -> P {
        self.pairs.iter().fold(P::zero(), |acc, (f, g)| acc + f.clone() * g.clone())
    }

    pub fn check_degrees(&self, g: usize) -> Result<()> {
        for (f, h) in &self.pairs {
            for p in [f, h] {
                if p.degree().is_some_and(|d| d >= g) {
                    return Err(Error::InvalidRelation(format!("degree of {p} exceeds {}", g - 1)));
                }
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadraticRelation { pairs: self.pairs.iter().map(|(f, g)| (f.scale(c), g.clone())).collect() }
    }

    pub fn sum(parts: &[QuadraticRelation]) -> Self {
        QuadraticRelation { pairs: parts.iter().flat_map(|r| r.pairs.iter().cloned()).collect() }
    }

    /// Coefficient tensor `Σ_i f_i[k] g_i[l]` as a `g x g` matrix.
    pub fn tensor(&self, g: usize) -> Matrix<Rational> {
        let mut m = Matrix::<Rational>::zeros(g, g);
        for (f, h) in &self.pairs {
            for k in 0..g {
                for l in 0..g {
                    let v = m.get(k, l).clone() + f.coeff(k) * h.coeff(l);
                    m.set(k, l, v);
                }
            }
        }
        m
    }

    fn eval_sum(&self, s: &Rational, u: &Rational) -> Rational {
        self.pairs.iter().fold(Rational::zero(), |acc, (f, g)| acc + f.eval(s) * g.eval(u))
    }
}

/// `Q(H) = H ⊗ Ht² + Ht² ⊗ H - 2 Ht ⊗ Ht`.
pub fn q_map_relation(h: &P) -> QuadraticRelation {
    let t = P::var();
    let ht = h.clone() * t.clone();
    let ht2 = ht.clone() * t;
    QuadraticRelation {
        pairs: vec![(h.clone(), ht2.clone()), (ht2, h.clone()), (ht.scale(&Rational::from_integer((-2).into())), ht)],
    }
}

/// Basis of the kernel of multiplication: `t^a ⊗ t^b - t^{a0} ⊗ t^{b0}`
/// where `(a0, b0)` is the first pair with `a0 + b0 = a + b`.
pub fn kernel_basis(g: usize) -> Vec<QuadraticRelation> {
    let mut out = Vec::new();
    for a in 0..g {
        for b in 0..g {
            let s = a + b;
            let a0 = s.saturating_sub(g - 1);
            if a == a0 {
                continue;
            }
            let one = Rational::one();
            out.push(QuadraticRelation {
                pairs: vec![
                    (P::monomial(one.clone(), a), P::monomial(one.clone(), b)),
                    (P::monomial(-one.clone(), a0), P::monomial(one, s - a0)),
                ],
            });
        }
    }
    out
}

/// Hankel matrices `[k + l = s]`, `s = 0..2g-2`: the annihilator of the kernel.
pub fn hankel_basis(g: usize) -> Vec<Matrix<Rational>> {
    (0..2 * g - 1)
        .map(|s| Matrix::from_fn(g, g, |k, l| if k + l == s { Rational::one() } else { Rational::zero() }))
        .collect()
}

/// `(sym + antisym·x/F)·dt/x`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OmegaLSection {
    pub sym: P,
    pub antisym: P,
}

impl OmegaLSection {
    pub fn zero() -> Self {
        OmegaLSection { sym: P::zero(), antisym: P::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.sym.is_zero() && self.antisym.is_zero()
    }

    /// The coefficient of `dt/x` as a function on the curve.
    pub fn to_curvefun(&self, cfg: &HyperellipticConfig) -> Result<CurveFun> {
        CurveFun::new(
            RatFun::from_poly(self.sym.clone()),
            RatFun::new(self.antisym.clone(), cfg.f_poly())?,
            cfg.branch_poly(),
        )
    }
}

/// `Σ plus_j e_j⁺ + minus_rescaled_j ê_j⁻`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ThetaCoord {
    #[serde(with = "rational_vec")]
    pub plus: Vec<Rational>,
    #[serde(with = "rational_vec")]
    pub minus_rescaled: Vec<Rational>,
}

impl ThetaCoord {
    pub fn zero(n: usize) -> Self {
        ThetaCoord { plus: vec![Rational::zero(); n], minus_rescaled: vec![Rational::zero(); n] }
    }

    /// The `k`-th vector of the basis `(e_1⁺..e_n⁺, ê_1⁻..ê_n⁻)`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut y = ThetaCoord::zero(n);
        if k < n {
            y.plus[k] = Rational::one();
        } else {
            y.minus_rescaled[k - n] = Rational::one();
        }
        y
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        self.plus.iter().chain(&self.minus_rescaled).cloned().collect()
    }

    pub fn from_vec(v: &[Rational]) -> Self {
        let n = v.len() / 2;
        ThetaCoord { plus: v[..n].to_vec(), minus_rescaled: v[n..].to_vec() }
    }

    fn check(&self, cfg: &HyperellipticConfig) -> Result<()> {
        if self.plus.len() != cfg.n() || self.minus_rescaled.len() != cfg.n() {
            return Err(Error::ShapeMismatch(format!("theta coordinates need length {}", cfg.n())));
        }
        Ok(())
    }
}

/// The section of `ω ⊗ L` restricting to `y · (f dt/x)|_D`.
pub fn phi_inverse(cfg: &HyperellipticConfig, y: &ThetaCoord, f: &P) -> OmegaLSection {
    let basis = cfg.lagrange_basis();
    let fb = cfg.f_at();
    let mut out = OmegaLSection::zero();
    for (j, gj) in basis.iter().enumerate() {
        let v = f.eval(&cfg.b[j]);
        out.sym = out.sym + gj.scale(&(y.plus[j].clone() * v.clone()));
        out.antisym = out.antisym + gj.scale(&(y.minus_rescaled[j].clone() * v * fb[j].clone()));
    }
    out
}

/// Restriction to `D` in the basis `(e⁺, ê⁻)`.
pub fn restrict(cfg: &HyperellipticConfig, s: &OmegaLSection) -> ThetaCoord {
    let fb = cfg.f_at();
    ThetaCoord {
        plus: cfg.b.iter().map(|v| s.sym.eval(v)).collect(),
        minus_rescaled: cfg.b.iter().zip(&fb).map(|(v, fv)| s.antisym.eval(v) / fv.clone()).collect(),
    }
}

fn divide_by_g(cfg: &HyperellipticConfig, sym: P, antisym: P) -> Result<OmegaLSection> {
    let g = cfg.g_poly();
    let fail = |p: &P| {
        let at = cfg.b.iter().find(|v| !p.eval(v).is_zero()).map(format_rational).unwrap_or_default();
        Error::RegularityFail(at)
    };
    Ok(OmegaLSection {
        sym: sym.div_exact(&g).map_err(|_| fail(&sym))?,
        antisym: antisym.div_exact(&g).map_err(|_| fail(&antisym))?,
    })
}

/// `m_3(f_1 dt/x, β(y), f_2 dt/x) = (φ^{-1}(y f_1) f_2 - φ^{-1}(y f_2) f_1) / α`.
pub fn m3_triple(cfg: &HyperellipticConfig, f1: &P, y: &ThetaCoord, f2: &P) -> Result<OmegaLSection> {
    y.check(cfg)?;
    let s1 = phi_inverse(cfg, y, f1);
    let s2 = phi_inverse(cfg, y, f2);
    divide_by_g(
        cfg,
        s1.sym * f2.clone() - s2.sym * f1.clone(),
        s1.antisym * f2.clone() - s2.antisym * f1.clone(),
    )
}

/// Overall sign of the Massey product.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MasseySign {
    /// `-Σ φ^{-1}(y·α_i) α'_i / α`.
    #[default]
    Standard,
    /// The same expression without the leading minus.
    Flipped,
}

/// `Σ_i m_3(β(y), α_i, α'_i)` for `ξ = Σ α_i ⊗ α'_i`.
pub fn massey_m3(cfg: &HyperellipticConfig, y: &ThetaCoord, xi: &QuadraticRelation) -> Result<OmegaLSection> {
    massey_m3_with(cfg, y, xi, MasseySign::Standard)
}

pub fn massey_m3_with(
    cfg: &HyperellipticConfig,
    y: &ThetaCoord,
    xi: &QuadraticRelation,
    sign: MasseySign,
) -> Result<OmegaLSection> {
    y.check(cfg)?;
    xi.check_degrees(cfg.g)?;
    let (mut sym, mut antisym) = (P::zero(), P::zero());
    for (f, h) in &xi.pairs {
        let s = phi_inverse(cfg, y, f);
        sym = sym + s.sym * h.clone();
        antisym = antisym + s.antisym * h.clone();
    }
    let out = divide_by_g(cfg, sym, antisym)?;
    Ok(match sign {
        MasseySign::Standard => OmegaLSection { sym: -out.sym, antisym: -out.antisym },
        MasseySign::Flipped => out,
    })
}

/// Matrix of `A_ξ = φ ∘ m_3(φ^∨(?) ⊗ ξ)` on `V` in the basis `(e⁺, ê⁻)`,
/// assembled column by column from [`massey_m3`].
pub fn massey_operator(cfg: &HyperellipticConfig, xi: &QuadraticRelation) -> Result<Matrix<Rational>> {
    let n = cfg.n();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for k in 0..2 * n {
        let col = restrict(cfg, &massey_m3(cfg, &ThetaCoord::basis(n, k), xi)?).to_vec();
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, k, v);
        }
    }
    Ok(m)
}

/// Closed-form blocks of `A_ξ` on `V⁺` (basis `e⁺`) and `V⁻` (basis `ê⁻`).
pub fn a_xi_matrix(cfg: &HyperellipticConfig, xi: &QuadraticRelation) -> (Matrix<Rational>, Matrix<Rational>) {
    let n = cfg.n();
    let gp = cfg.gprime_at();
    let fb = cfg.f_at();
    let b = &cfg.b;
    let mut plus = Matrix::zeros(n, n);
    let mut minus = Matrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            if j == k {
                let d = xi
                    .pairs
                    .iter()
                    .fold(Rational::zero(), |acc, (f, h)| acc + f.eval(&b[j]) * h.derivative().eval(&b[j]));
                let v = -d / gp[j].clone();
                plus.set(j, j, v.clone());
                minus.set(j, j, v);
            } else {
                let v = -xi.eval_sum(&b[j], &b[k]) / (gp[j].clone() * (b[k].clone() - b[j].clone()));
                minus.set(k, j, v.clone() * fb[j].clone() / fb[k].clone());
                plus.set(k, j, v);
            }
        }
    }
    (plus, minus)
}

/// Diagonal weights `⟨e_j⁺, ê_j⁻⟩ = 2F(b_j)/G'(b_j)`.
pub fn pairing_matrix(cfg: &HyperellipticConfig) -> Vec<Rational> {
    let two = Rational::from_integer(2.into());
    cfg.f_at().into_iter().zip(cfg.gprime_at()).map(|(f, gp)| two.clone() * f / gp).collect()
}

/// Gram matrix of the pairing on `V` in the basis `(e⁺, ê⁻)`.
pub fn pairing_gram(cfg: &HyperellipticConfig) -> Matrix<Rational> {
    let n = cfg.n();
    let p = pairing_matrix(cfg);
    Matrix::from_fn(2 * n, 2 * n, |r, c| {
        if r + n == c {
            p[r].clone()
        } else if c + n == r {
            p[c].clone()
        } else {
            Rational::zero()
        }
    })
}

/// The adjoint of an operator on `V⁺` as an operator on `V⁻`:
/// `⟨A x, y⟩ = ⟨x, A* y⟩` for `x ∈ V⁺`, `y ∈ V⁻`.
pub fn adjoint(cfg: &HyperellipticConfig, a_plus: &Matrix<Rational>) -> Matrix<Rational> {
    let p = pairing_matrix(cfg);
    Matrix::from_fn(a_plus.rows(), a_plus.cols(), |k, j| a_plus.get(j, k).clone() * p[j].clone() / p[k].clone())
}

/// `A_ξ - A_ξ*` on `V⁻` in the basis `ê⁻`, from the closed formula
/// `F(b_j) / (F(b_k) G'(b_j) (b_j - b_k)) · Σ_i (f_i(b_j) g_i(b_k) + g_i(b_j) f_i(b_k))`
/// for the `ê_k` coefficient of the image of `ê_j`.
pub fn skew_part(cfg: &HyperellipticConfig, xi: &QuadraticRelation) -> Matrix<Rational> {
    let n = cfg.n();
    let gp = cfg.gprime_at();
    let fb = cfg.f_at();
    let b = &cfg.b;
    Matrix::from_fn(n, n, |k, j| {
        if j == k {
            return Rational::zero();
        }
        let s = xi.eval_sum(&b[j], &b[k]) + xi.eval_sum(&b[k], &b[j]);
        fb[j].clone() * s / (fb[k].clone() * gp[j].clone() * (b[j].clone() - b[k].clone()))
    })
}

/// The same operator from the source basis `G'(b_j)/F(b_j) ê_j` to the target
/// basis `ê_k / F(b_k)`: entry `(k, j)` is `S_jk / (b_j - b_k)`, a
/// skew-symmetric matrix.
pub fn skew_part_balanced(cfg: &HyperellipticConfig, xi: &QuadraticRelation) -> Matrix<Rational> {
    let m = skew_part(cfg, xi);
    let gp = cfg.gprime_at();
    let fb = cfg.f_at();
    Matrix::from_fn(m.rows(), m.cols(), |k, j| m.get(k, j).clone() * gp[j].clone() * fb[k].clone() / fb[j].clone())
}

/// `A_ξ - A_ξ*` on all of `V`, with the `V⁺` block recovered from skew-adjointness.
pub fn full_skew_operator(cfg: &HyperellipticConfig, xi: &QuadraticRelation) -> Matrix<Rational> {
    let minus = skew_part(cfg, xi);
    let plus = -adjoint(cfg, &minus);
    block_diag(&plus, &minus)
}

fn block_diag(a: &Matrix<Rational>, d: &Matrix<Rational>) -> Matrix<Rational> {
    let (n, m) = (a.rows(), d.rows());
    Matrix::from_fn(n + m, n + m, |r, c| {
        if r < n && c < n {
            a.get(r, c).clone()
        } else if r >= n && c >= n {
            d.get(r - n, c - n).clone()
        } else {
            Rational::zero()
        }
    })
}

/// Skew form `(x, y) ↦ ⟨x, A y⟩ - ⟨A x, y⟩` on `V`.
pub fn skew_form(cfg: &HyperellipticConfig, a: &Matrix<Rational>) -> Matrix<Rational> {
    let pi = pairing_gram(cfg);
    (&pi * a) - (&a.transpose() * &pi)
}

/// `B(H)_{qp} = H(b_p) H(b_q) (b_p - b_q)`.
pub fn b_matrix(cfg: &HyperellipticConfig, h: &P) -> Result<SkewMatrix<Rational>> {
    if let Some(d) = h.degree() {
        if d + 3 > cfg.g {
            return Err(Error::DegreeTooHigh(d, cfg.g.saturating_sub(3)));
        }
    }
    let hb: Vec<Rational> = cfg.b.iter().map(|v| h.eval(v)).collect();
    let n = cfg.n();
    let m = Matrix::from_fn(n, n, |q, p| hb[p].clone() * hb[q].clone() * (cfg.b[p].clone() - cfg.b[q].clone()));
    SkewMatrix::new(m)
}

/// Exact rank of `Σ_i B(H_i)`.
pub fn schottky_rank(cfg: &HyperellipticConfig, hs: &[P]) -> Result<usize> {
    let n = cfg.n();
    let mut total = Matrix::zeros(n, n);
    for h in hs {
        total = total + b_matrix(cfg, h)?.into_matrix();
    }
    Ok(rank_exact(&total))
}

/// `1, t², t⁴, ...`: `(g-1)/2` of them for odd `g`, `(g-2)/2` for even `g`.
#[allow(non_snake_case)]
pub fn monomial_H(g: usize) -> Vec<P> {
    let count = if g % 2 == 1 { (g - 1) / 2 } else { (g - 2) / 2 };
    (0..count).map(|i| P::monomial(Rational::one(), 2 * i)).collect()
}

/// Rank of `Σ B(H_i)` expected for [`monomial_H`].
pub fn expected_rank(g: usize) -> usize {
    if g % 2 == 1 {
        g - 1
    } else {
        g - 2
    }
}

/// `Σ_i Q(H_i)`.
pub fn assembled_relation(hs: &[P]) -> QuadraticRelation {
    QuadraticRelation::sum(&hs.iter().map(q_map_relation).collect::<Vec<_>>())
}

/// For each pair `a < b` of basis directions of `V`, a `g x g` matrix `Φ`
/// with `Σ_{k,l} ξ[k][l] Φ[k][l]` equal to the `(a, b)` entry of the skew
/// form of `ξ`, for every `ξ` in [`kernel_basis`]. `Φ` is unique modulo
/// [`hankel_basis`].
pub fn massey_class_matrices(
    cfg: &HyperellipticConfig,
    skew_form_of: impl Fn(&QuadraticRelation) -> Result<Matrix<Rational>>,
) -> Result<Vec<((usize, usize), Matrix<Rational>)>> {
    let g = cfg.g;
    let kb = kernel_basis(g);
    let forms: Vec<Matrix<Rational>> = kb.iter().map(&skew_form_of).collect::<Result<_>>()?;
    let eqs = Matrix::from_fn(kb.len(), g * g, |r, p| kb[r].tensor(g).get(p / g, p % g).clone());
    let dim = 2 * cfg.n();
    let mut out = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            let rhs: Vec<Rational> = forms.iter().map(|f| f.get(a, b).clone()).collect();
            let phi = eqs.solve(&rhs).ok_or_else(|| Error::InvalidInput("kernel basis is inconsistent".into()))?;
            out.push(((a, b), Matrix::from_fn(g, g, |k, l| phi[k * g + l].clone())));
        }
    }
    Ok(out)
}

/// The family of `g`-planes in `H^0(ω) ⊕ H^1(O)` over `2g - 2` odd
/// parameters whose `η_a η_b` part is `-Φ_ab`, with the Hankel directions
/// declared as first-order even deformations.
pub fn period_family(
    cfg: &HyperellipticConfig,
    classes: &[((usize, usize), Matrix<Rational>)],
    gauge: Option<&Matrix<GrassmannElt<Rational>>>,
) -> Result<SubspaceFamily> {
    let g = cfg.g;
    let m = 2 * cfg.n();
    let shape = Shape::new(m, 3);
    let mut gens: Matrix<GrassmannElt<Rational>> = Matrix::from_fn(2 * g, g, |r, c| {
        GrassmannElt::constant(shape, if r == c { Rational::one() } else { Rational::zero() })
    });
    for ((a, b), phi) in classes {
        for k in 0..g {
            for l in 0..g {
                let c = phi.get(k, l);
                if c.is_zero() {
                    continue;
                }
                let v = gens.get(g + k, l).clone() + GrassmannElt::monomial(shape, &[*a, *b], -c.clone());
                gens.set(g + k, l, v);
            }
        }
    }
    if let Some(h) = gauge {
        gens = &gens * h;
    }
    let dirs: Vec<Matrix<Rational>> = hankel_basis(g)
        .into_iter()
        .map(|h| Matrix::<Rational>::zeros(g, g).vstack(&h).expect("same width"))
        .collect();
    let dirs = match gauge {
        Some(h) => {
            let h0 = h.map(|x| x.constant_term());
            dirs.into_iter().map(|d: Matrix<Rational>| &d * &h0).collect()
        }
        None => dirs,
    };
    SubspaceFamily::new(m, &gens)?.with_even_directions(dirs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn worked() -> (HyperellipticConfig, QuadraticRelation) {
        let cfg = HyperellipticConfig::with_zeros(3, ints(&[0, 1])).unwrap();
        (cfg, q_map_relation(&P::from_ints(&[1])))
    }

    #[test]
    fn config_validation() {
        let ok = HyperellipticConfig::new(3, ints(&[0, 1, 2, 3, 4, 5, 6]), ints(&[-1, -2]));
        assert!(ok.is_ok());
        assert_eq!(
            HyperellipticConfig::new(3, ints(&[0, 1, 2, 3, 4, 5, 6]), ints(&[0, -2])).unwrap_err(),
            Error::ZeroCollision("0".into())
        );
        assert_eq!(
            HyperellipticConfig::new(3, ints(&[0, 1, 2, 3, 4, 5, 5]), ints(&[-1, -2])).unwrap_err(),
            Error::DuplicateBranch("5".into())
        );
    }

    #[test]
    fn omega_basis_is_monomial() {
        let cfg = HyperellipticConfig::with_zeros(4, ints(&[-1, -2, -3])).unwrap();
        let basis = omega_basis(&cfg);
        assert_eq!(basis.len(), 4);
        assert_eq!(basis[3], P::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn worked_massey_instance() {
        let (cfg, xi) = worked();
        let m = massey_m3(&cfg, &ThetaCoord::basis(2, 0), &xi).unwrap();
        assert_eq!(m.sym, P::from_ints(&[0, 1]));
        assert!(m.antisym.is_zero());
        let m = massey_m3(&cfg, &ThetaCoord::basis(2, 2), &xi).unwrap();
        let f0 = cfg.f_poly().eval(&int(0));
        assert!(m.sym.is_zero());
        assert_eq!(m.antisym, P::from_ints(&[0, 1]).scale(&f0));
        assert!(massey_m3(&cfg, &ThetaCoord::zero(2), &xi).unwrap().is_zero());
    }

    #[test]
    fn invalid_relation_fails_regularity() {
        let (cfg, _) = worked();
        let bad = QuadraticRelation { pairs: vec![(P::from_ints(&[1]), P::from_ints(&[1]))] };
        assert!(matches!(massey_m3(&cfg, &ThetaCoord::basis(2, 0), &bad), Err(Error::RegularityFail(_))));
        assert!(QuadraticRelation::new(bad.pairs).is_err());
    }

    #[test]
    fn closed_form_matches_pipeline() {
        let cfg = HyperellipticConfig::with_zeros(5, vec![int(-1), rat(1, 2), int(3), int(-7)]).unwrap();
        let xi = QuadraticRelation::sum(&[
            q_map_relation(&P::from_ints(&[1, 2])),
            kernel_basis(5)[3].scale(&rat(3, 5)),
            kernel_basis(5)[7].clone(),
        ]);
        let full = massey_operator(&cfg, &xi).unwrap();
        let (plus, minus) = a_xi_matrix(&cfg, &xi);
        assert_eq!(full, block_diag(&plus, &minus));
        for j in 0..4 {
            assert_eq!(plus.get(j, j), minus.get(j, j));
        }
        assert_eq!(skew_part(&cfg, &xi), minus.clone() - adjoint(&cfg, &plus));
        let form = skew_form(&cfg, &full);
        assert_eq!(form, &pairing_gram(&cfg) * &full_skew_operator(&cfg, &xi));
        assert!(form.is_skew());
    }

    #[test]
    fn worked_a_xi() {
        let (cfg, xi) = worked();
        let (plus, _) = a_xi_matrix(&cfg, &xi);
        assert!(plus.get(0, 0).is_zero());
        assert_eq!(plus.get(1, 0), &int(1));
        let (z, _) = a_xi_matrix(&cfg, &QuadraticRelation::zero());
        assert!(z.is_zero());
    }

    #[test]
    fn b_matrix_examples() {
        let cfg = HyperellipticConfig::with_zeros(3, ints(&[1, 2])).unwrap();
        let b = b_matrix(&cfg, &P::from_ints(&[1])).unwrap();
        assert_eq!(b.matrix(), &Matrix::from_int_rows(&[vec![0, 1], vec![-1, 0]]));
        assert!(matches!(b_matrix(&cfg, &P::from_ints(&[0, 1])), Err(Error::DegreeTooHigh(1, 0))));
        let cfg = HyperellipticConfig::with_zeros(4, ints(&[1, 2, 3])).unwrap();
        let b = b_matrix(&cfg, &P::from_ints(&[1])).unwrap();
        assert_eq!(b.matrix(), &Matrix::from_int_rows(&[vec![0, 1, 2], vec![-1, 0, 1], vec![-2, -1, 0]]));
        assert_eq!(schottky_rank(&cfg, &[P::from_ints(&[1])]).unwrap(), 2);
        assert_eq!(schottky_rank(&cfg, &[]).unwrap(), 0);
        let cfg = HyperellipticConfig::with_zeros(5, ints(&[1, 2, 3, 4])).unwrap();
        assert_eq!(schottky_rank(&cfg, &monomial_H(5)).unwrap(), 4);
    }

    #[test]
    fn balanced_skew_is_twice_b() {
        let cfg = HyperellipticConfig::with_zeros(6, vec![int(2), rat(-1, 3), int(5), int(-4), rat(7, 2)]).unwrap();
        let h = P::from_ints(&[1, 0, -2]);
        let bal = skew_part_balanced(&cfg, &q_map_relation(&h));
        assert!(bal.is_skew());
        let b = b_matrix(&cfg, &h).unwrap().into_matrix();
        assert_eq!(bal, b.map(|x| x * int(2)));
    }

    #[test]
    fn monomial_h_lengths() {
        assert_eq!(monomial_H(5), vec![P::from_ints(&[1]), P::from_ints(&[0, 0, 1])]);
        assert_eq!(monomial_H(4).len(), 1);
        assert_eq!(monomial_H(7).len(), 3);
    }

    #[test]
    fn pairing_values() {
        let cfg = HyperellipticConfig::new(3, ints(&[0, 1, 2, 3, 4, 5, 6]), ints(&[-1, -2])).unwrap();
        // F = t(t-1)(t-2), G = (t+1)(t+2), G' = 2t + 3
        assert_eq!(pairing_matrix(&cfg), vec![int(2 * -6), int(2 * -24) / int(-1)]);
        let gram = pairing_gram(&cfg);
        assert!(gram.submatrix(&[0, 1], &[0, 1]).is_zero());
        assert!(gram.is_symmetric());
    }

    #[test]
    fn kernel_dimension() {
        for g in 3..7 {
            let kb = kernel_basis(g);
            assert_eq!(kb.len(), g * g - (2 * g - 1));
            assert!(kb.iter().all(|r| r.product().is_zero()));
        }
    }

    #[test]
    fn period_family_matches_skew_massey() {
        use crate::second_variation::second_variation;
        use crate::supermatrix::constant_matrix;
        let cfg = HyperellipticConfig::with_zeros(3, vec![rat(1, 2), int(-3)]).unwrap();
        let route_a = massey_class_matrices(&cfg, |xi| Ok(skew_form(&cfg, &massey_operator(&cfg, xi)?))).unwrap();
        let route_b = massey_class_matrices(&cfg, |xi| {
            Ok(&pairing_gram(&cfg) * &full_skew_operator(&cfg, xi))
        })
        .unwrap();
        let shape = Shape::new(4, 3);
        let gauge = constant_matrix(shape, &Matrix::from_int_rows(&[vec![2, 1, 0], vec![0, 1, 0], vec![1, 0, 1]]))
            + Matrix::from_fn(3, 3, |r, c| {
                if r == c {
                    GrassmannElt::monomial(shape, &[0, 3], int(r as i64 + 1))
                } else {
                    GrassmannElt::zero_in(shape)
                }
            });
        let fam = period_family(&cfg, &route_a, Some(&gauge)).unwrap();
        let sv = second_variation(&fam);
        for ((a, b), phi) in &route_b {
            let want = sv.quotient.reduce(&phi.map(|x| -x.clone()));
            assert_eq!(sv.class(*a, *b), Some(&want));
        }
        assert!(sv.classes.iter().any(|c| !c.is_zero()));
    }
}
