//! Random instances with bounded heights, for sweeps and property checks.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{Blade, GrassmannElt, Parity, Shape};
use crate::hyperelliptic::{kernel_basis, q_map_relation, HyperellipticConfig, QuadraticRelation, ThetaCoord};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::Rational;
use crate::superconformal::ZSeries;

/// Rationals `p/q` with `|p| ≤ num` and `1 ≤ q ≤ den`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HeightBox {
    pub num: i64,
    pub den: i64,
}

impl Default for HeightBox {
    fn default() -> Self {
        HeightBox { num: 20, den: 5 }
    }
}

impl HeightBox {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if num < 0 || den < 1 {
            return Err(Error::InvalidInput(format!("bad sampling box {num}/{den}")));
        }
        Ok(HeightBox { num, den })
    }

    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> Rational {
        Rational::new(rng.gen_range(-self.num..=self.num).into(), rng.gen_range(1..=self.den).into())
    }

    fn sample_nonzero<G: Rng + ?Sized>(&self, rng: &mut G) -> Rational {
        loop {
            let q = self.sample(rng);
            if !q.is_zero() || self.num == 0 {
                return q;
            }
        }
    }
}

const MAX_REJECTIONS: usize = 10_000;

/// `count` distinct values from the box avoiding `avoid`, by rejection.
pub fn distinct_values<G: Rng + ?Sized>(
    rng: &mut G,
    count: usize,
    hb: HeightBox,
    avoid: &[Rational],
) -> Result<Vec<Rational>> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        let q = hb.sample(rng);
        if !out.contains(&q) && !avoid.contains(&q) {
            out.push(q);
            continue;
        }
        tries += 1;
        if tries > MAX_REJECTIONS {
            return Err(Error::InvalidInput(format!(
                "box {}/{} cannot supply {count} distinct values",
                hb.num, hb.den
            )));
        }
    }
    Ok(out)
}

/// Random zeros `b` with branch values the first `2g + 1` integers avoiding them.
pub fn random_config<G: Rng + ?Sized>(rng: &mut G, g: usize, hb: HeightBox) -> Result<HyperellipticConfig> {
    let b = distinct_values(rng, g - 1, hb, &[])?;
    HyperellipticConfig::with_zeros(g, b)
}

pub fn random_poly<G: Rng + ?Sized>(rng: &mut G, max_degree: usize, hb: HeightBox) -> Poly<Rational> {
    Poly::new((0..=max_degree).map(|_| hb.sample(rng)).collect())
}

/// Random `H` of degree at most `g - 3`, nonzero.
pub fn random_h<G: Rng + ?Sized>(rng: &mut G, g: usize, hb: HeightBox) -> Poly<Rational> {
    loop {
        let h = random_poly(rng, g - 3, hb);
        if !h.is_zero() {
            return h;
        }
    }
}

/// A random element of the kernel of multiplication: a combination of
/// `Q(H)` terms and kernel basis elements, with the pairs mixed by a
/// random invertible change of the first factors.
pub fn random_relation<G: Rng + ?Sized>(rng: &mut G, g: usize, hb: HeightBox) -> QuadraticRelation {
    let mut parts = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        parts.push(q_map_relation(&random_h(rng, g, hb)));
    }
    let kb = kernel_basis(g);
    for _ in 0..rng.gen_range(1..=3) {
        let k = rng.gen_range(0..kb.len());
        parts.push(kb[k].scale(&hb.sample_nonzero(rng)));
    }
    let xi = QuadraticRelation::sum(&parts);
    // Σ f_i ⊗ g_i = Σ (f M)_i ⊗ (g M^{-T})_i for invertible M
    let n = xi.pairs.len();
    let mut m;
    loop {
        m = random_matrix(rng, n, n, hb);
        if m.rank() == n {
            break;
        }
    }
    let minv_t = m.try_inverse().expect("full rank").transpose();
    let mix = |mat: &Matrix<Rational>, first: bool| -> Vec<Poly<Rational>> {
        (0..n)
            .map(|j| {
                (0..n).fold(Poly::zero(), |acc, i| {
                    let p = if first { &xi.pairs[i].0 } else { &xi.pairs[i].1 };
                    acc + p.scale(mat.get(i, j))
                })
            })
            .collect()
    };
    let fs = mix(&m, true);
    let gs = mix(&minv_t, false);
    QuadraticRelation { pairs: fs.into_iter().zip(gs).collect() }
}

pub fn random_theta<G: Rng + ?Sized>(rng: &mut G, n: usize, hb: HeightBox) -> ThetaCoord {
    ThetaCoord {
        plus: (0..n).map(|_| hb.sample(rng)).collect(),
        minus_rescaled: (0..n).map(|_| hb.sample(rng)).collect(),
    }
}

pub fn random_matrix<G: Rng + ?Sized>(rng: &mut G, rows: usize, cols: usize, hb: HeightBox) -> Matrix<Rational> {
    let data = (0..rows * cols).map(|_| hb.sample(rng)).collect();
    Matrix::new(rows, cols, data).expect("sizes agree")
}

/// Random invertible square matrix.
pub fn random_invertible<G: Rng + ?Sized>(rng: &mut G, n: usize, hb: HeightBox) -> Matrix<Rational> {
    loop {
        let m = random_matrix(rng, n, n, hb);
        if m.rank() == n {
            return m;
        }
    }
}

pub fn random_skew<G: Rng + ?Sized>(rng: &mut G, n: usize, hb: HeightBox) -> Matrix<Rational> {
    let upper = random_matrix(rng, n, n, hb);
    Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => upper.get(i, j).clone(),
        std::cmp::Ordering::Greater => -upper.get(j, i).clone(),
        std::cmp::Ordering::Equal => Rational::zero(),
    })
}

/// Random Grassmann element of the given parity; each blade is kept with
/// probability `density`.
pub fn random_grassmann<G: Rng + ?Sized>(
    rng: &mut G,
    shape: Shape,
    parity: Parity,
    density: f64,
    hb: HeightBox,
) -> GrassmannElt<Rational> {
    let mut terms = Vec::new();
    for b in (0u64..1 << shape.generators).map(Blade) {
        if b.grade() < shape.truncation && Parity::of_grade(b.grade()) == parity && rng.gen_bool(density) {
            terms.push((b, hb.sample(rng)));
        }
    }
    GrassmannElt::from_terms(shape, terms)
}

/// Random skew matrix with even Grassmann entries.
pub fn random_even_skew<G: Rng + ?Sized>(
    rng: &mut G,
    n: usize,
    shape: Shape,
    hb: HeightBox,
) -> Matrix<GrassmannElt<Rational>> {
    let mut m = Matrix::from_fn(n, n, |_, _| GrassmannElt::zero_in(shape));
    for i in 0..n {
        for j in i + 1..n {
            let x = random_grassmann(rng, shape, Parity::Even, 0.5, hb);
            m.set(j, i, -x.clone());
            m.set(i, j, x);
        }
    }
    m
}

/// Random even `ZSeries` `z + (nilpotent, degree ≤ deg)` for `S_f`, and
/// odd `φ` of degree `≤ deg`.
pub fn random_superconformal_data<G: Rng + ?Sized>(
    rng: &mut G,
    shape: Shape,
    deg: usize,
    hb: HeightBox,
) -> (ZSeries, ZSeries) {
    let series = |rng: &mut G, parity: Parity| -> ZSeries {
        let mut terms = Vec::new();
        for b in (0u64..1 << shape.generators).map(Blade) {
            let wanted = b.grade() > 0 && b.grade() < shape.truncation && Parity::of_grade(b.grade()) == parity;
            if wanted && rng.gen_bool(0.5) {
                terms.push((b, random_poly(rng, deg, hb)));
            }
        }
        GrassmannElt::from_terms(shape, terms)
    };
    let f = GrassmannElt::constant(shape, Poly::var()) + series(rng, Parity::Even);
    let phi = series(rng, Parity::Odd);
    (f, phi)
}
