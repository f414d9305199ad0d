//! Tangent map and second variation of a family of subspaces over the odd
//! base `Λ(η_1..η_m)/Λ^{≥3}`.
//!
//! Generators are first normalized so that a fixed set of pivot rows (chosen
//! from the reduced matrix) forms the identity. In that gauge the family is
//! the graph of a map `S_0 -> V/S_0`, written on the remaining rows, and the
//! coefficients of `η_i` and `η_i η_j` are read off directly. Any change of
//! generators by an invertible matrix leads to the same normalized form.

use crate::error::{Error, Result};
use crate::grassmann::{Blade, GrassmannElt, Shape};
use crate::matrix::Matrix;
use crate::scalar::Rational;
use crate::supermatrix::{grassmann_inverse, independent_rows};

type G = GrassmannElt<Rational>;

#[derive(Clone, Debug)]
pub struct SubspaceFamily {
    shape: Shape,
    gens: Matrix<G>,
    /// Pivot rows (a basis of `S_0` in coordinates) and the complementary
    /// rows, which index the basis of `V/S_0`.
    pivots: Vec<usize>,
    quotient_rows: Vec<usize>,
    normalized: Matrix<G>,
    s0: Matrix<Rational>,
    /// Extra first-order directions whose images are also quotiented out.
    even_directions: Vec<Matrix<Rational>>,
}

impl SubspaceFamily {
    /// `gens` is `n x r` with columns independent modulo nilpotents; entries
    /// are truncated to `Λ^{<3}` in `m` generators.
    pub fn new(num_generators: usize, gens: &Matrix<G>) -> Result<Self> {
        let shape = Shape::new(num_generators, 3);
        let gens = gens.map(|x| x.reshape(shape));
        let s0 = gens.map(|x| x.constant_term());
        if s0.rank() != gens.cols() {
            return Err(Error::InvalidInput("generators are dependent modulo nilpotents".into()));
        }
        let pivots = independent_rows(&s0);
        let quotient_rows: Vec<usize> = (0..gens.rows()).filter(|i| !pivots.contains(i)).collect();
        let sp_inv = grassmann_inverse(&gens.select_rows(&pivots))?;
        let normalized = &gens * &sp_inv;
        let s0 = normalized.map(|x| x.constant_term());
        Ok(SubspaceFamily { shape, gens, pivots, quotient_rows, normalized, s0, even_directions: Vec::new() })
    }

    /// Adds first-order even deformations `dS` (`n x r`, in the basis of the
    /// given generators) whose images in `Hom(S_0, V/S_0)` are quotiented out
    /// of the second variation along with the odd tangent images.
    pub fn with_even_directions(mut self, dirs: Vec<Matrix<Rational>>) -> Result<Self> {
        for d in &dirs {
            if (d.rows(), d.cols()) != (self.gens.rows(), self.gens.cols()) {
                return Err(Error::ShapeMismatch("even direction has the wrong size".into()));
            }
        }
        self.even_directions = dirs;
        Ok(self)
    }

    pub fn ambient_dim(&self) -> usize {
        self.gens.rows()
    }

    pub fn rank(&self) -> usize {
        self.gens.cols()
    }

    pub fn num_generators(&self) -> usize {
        self.shape.generators
    }

    pub fn generators(&self) -> &Matrix<G> {
        &self.gens
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivots
    }

    pub fn quotient_rows(&self) -> &[usize] {
        &self.quotient_rows
    }

    /// Normalized generators (identity on the pivot rows).
    pub fn normalized(&self) -> &Matrix<G> {
        &self.normalized
    }

    fn coefficient(&self, blade: Blade) -> Matrix<Rational> {
        self.normalized.select_rows(&self.quotient_rows).map(|x| x.coeff(blade))
    }

    /// Image of a first-order deformation `dS` of the raw generators.
    pub fn project_direction(&self, ds: &Matrix<Rational>) -> Matrix<Rational> {
        let s0_raw = self.gens.map(|x| x.constant_term());
        let sp_inv = s0_raw.select_rows(&self.pivots).try_inverse().expect("pivot block is invertible");
        // derivative of S S_P^{-1}
        let d = &(ds - &(&self.s0 * &ds.select_rows(&self.pivots))) * &sp_inv;
        d.select_rows(&self.quotient_rows)
    }

    pub fn reduced(&self) -> &Matrix<Rational> {
        &self.s0
    }
}

/// `Hom(S_0, V/S_0)` images of `∂/∂η_i`, as `(n - r) x r` matrices.
pub fn tangent_map(f: &SubspaceFamily) -> Vec<Matrix<Rational>> {
    (0..f.num_generators()).map(|i| f.coefficient(Blade(1 << i))).collect()
}

/// A class in `Hom(S_0, V/S_0) / W`, written in the complement coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientClass {
    /// `(row, col)` entries of an `(n - r) x r` matrix that span a complement of `W`.
    pub complement: Vec<(usize, usize)>,
    pub values: Vec<Rational>,
}

impl QuotientClass {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(num_traits::Zero::is_zero)
    }
}

/// Reduction modulo a span of matrices, with a deterministic complement:
/// the coordinates not used as pivots by the spanning set.
#[derive(Clone, Debug)]
pub struct Quotient {
    shape: (usize, usize),
    span: Matrix<Rational>,
    pivots: Vec<usize>,
    complement: Vec<usize>,
}

impl Quotient {
    pub fn new(rows: usize, cols: usize, span: &[Matrix<Rational>]) -> Self {
        let len = rows * cols;
        let w = Matrix::from_fn(len, span.len(), |p, k| span[k].get(p / cols, p % cols).clone());
        let basis_cols = w.rref().1;
        let w = w.select_cols(&basis_cols);
        let pivots = independent_rows(&w);
        let complement = (0..len).filter(|p| !pivots.contains(p)).collect();
        Quotient { shape: (rows, cols), span: w, pivots, complement }
    }

    pub fn reduce(&self, x: &Matrix<Rational>) -> QuotientClass {
        let (rows, cols) = self.shape;
        assert_eq!((x.rows(), x.cols()), (rows, cols), "class has the wrong shape");
        let flat: Vec<Rational> = x.entries().to_vec();
        let values = if self.pivots.is_empty() {
            flat
        } else {
            let wp = self.span.select_rows(&self.pivots);
            let xp: Vec<Rational> = self.pivots.iter().map(|&p| flat[p].clone()).collect();
            let c = wp.solve(&xp).expect("pivot block is invertible");
            let fix = &self.span * &Matrix::from_column(&c);
            flat.iter().enumerate().map(|(p, v)| v.clone() - fix.get(p, 0).clone()).collect()
        };
        QuotientClass {
            complement: self.complement.iter().map(|&p| (p / cols, p % cols)).collect(),
            values: self.complement.iter().map(|&p| values[p].clone()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }
}

/// Second variation along `η_i ∧ η_j` for `i < j`, in the order
/// `(0,1), (0,2), ..., (1,2), ...`.
#[derive(Clone, Debug)]
pub struct SecondVariation {
    pub pairs: Vec<(usize, usize)>,
    /// Raw `η_i η_j` coefficients of the normalized family.
    pub raw: Vec<Matrix<Rational>>,
    pub classes: Vec<QuotientClass>,
    pub quotient: Quotient,
}

impl SecondVariation {
    pub fn class(&self, i: usize, j: usize) -> Option<&QuotientClass> {
        self.pairs.iter().position(|&p| p == (i.min(j), i.max(j))).map(|k| &self.classes[k])
    }
}

/// The span `W` the second variation is taken modulo: odd tangent images
/// plus the images of the declared even directions.
pub fn tangent_span(f: &SubspaceFamily) -> Quotient {
    let mut span = tangent_map(f);
    span.extend(f.even_directions.iter().map(|d| f.project_direction(d)));
    Quotient::new(f.ambient_dim() - f.rank(), f.rank(), &span)
}

pub fn second_variation(f: &SubspaceFamily) -> SecondVariation {
    let quotient = tangent_span(f);
    let m = f.num_generators();
    let mut pairs = Vec::new();
    let mut raw = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            pairs.push((i, j));
            raw.push(f.coefficient(Blade((1 << i) | (1 << j))));
        }
    }
    let classes = raw.iter().map(|x| quotient.reduce(x)).collect();
    SecondVariation { pairs, raw, classes, quotient }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn s(m: usize) -> Shape {
        Shape::full(m)
    }

    fn col(entries: Vec<G>) -> Matrix<G> {
        Matrix::from_column(&entries)
    }

    #[test]
    fn constant_family() {
        let f = SubspaceFamily::new(2, &col(vec![G::scalar(int(1)), G::scalar(int(0))])).unwrap();
        assert!(tangent_map(&f).iter().all(|t| t.is_zero()));
        assert!(second_variation(&f).classes.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn first_order_family() {
        let e1 = G::generator(s(2), 0);
        let f = SubspaceFamily::new(2, &col(vec![G::scalar(int(1)), e1])).unwrap();
        let t = tangent_map(&f);
        assert_eq!(t[0], Matrix::from_int_rows(&[vec![1]]));
        assert!(t[1].is_zero());
        assert!(second_variation(&f).raw[0].is_zero());
    }

    #[test]
    fn pure_second_order() {
        let e12 = G::monomial(s(2), &[0, 1], int(1));
        let f = SubspaceFamily::new(2, &col(vec![G::scalar(int(1)), e12])).unwrap();
        assert!(tangent_map(&f).iter().all(|t| t.is_zero()));
        let sv = second_variation(&f);
        assert_eq!(sv.class(0, 1).unwrap().values, vec![int(1)]);
    }

    #[test]
    fn modulo_tangent_image() {
        let e1 = G::generator(s(2), 0);
        let e12 = G::monomial(s(2), &[0, 1], int(1));
        let f = SubspaceFamily::new(2, &col(vec![G::scalar(int(1)), e1.clone(), e12.clone()])).unwrap();
        let sv = second_variation(&f);
        let c = sv.class(0, 1).unwrap();
        assert_eq!(c.complement, vec![(1, 0)]);
        assert_eq!(c.values, vec![int(1)]);
        // adding a multiple of the tangent image does not change the class
        let e12x = e12.clone() + G::scalar(int(0));
        let g = SubspaceFamily::new(
            2,
            &col(vec![G::scalar(int(1)), e1 + G::monomial(s(2), &[0, 1], int(5)), e12x]),
        )
        .unwrap();
        assert_eq!(second_variation(&g).class(0, 1), Some(c));
    }

    #[test]
    fn gauge_invariance() {
        let sh = s(3);
        let e = |i| G::generator(sh, i);
        let m2 = |i, j, c| G::monomial(sh, &[i, j], int(c));
        let gens = Matrix::from_rows(vec![
            vec![G::scalar(int(1)), G::scalar(int(0))],
            vec![e(0), G::scalar(int(2))],
            vec![m2(0, 1, 3), e(2)],
            vec![G::scalar(int(1)) + m2(1, 2, 1), m2(0, 2, -1)],
        ])
        .unwrap();
        let f = SubspaceFamily::new(3, &gens).unwrap();
        let gauge = Matrix::from_rows(vec![
            vec![G::scalar(int(2)) + m2(0, 1, 1), G::scalar(int(1))],
            vec![m2(1, 2, 4), G::scalar(int(1)) + m2(0, 2, 7)],
        ])
        .unwrap();
        let fg = SubspaceFamily::new(3, &(&gens * &gauge)).unwrap();
        assert_eq!(tangent_map(&f), tangent_map(&fg));
        let (a, b) = (second_variation(&f), second_variation(&fg));
        assert_eq!(a.classes, b.classes);
    }
}
