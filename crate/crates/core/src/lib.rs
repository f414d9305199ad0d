//! Exact supercommutative linear algebra and hyperelliptic Massey products.

pub mod curve;
pub mod error;
pub mod experiment;
pub mod grassmann;
pub mod hyperelliptic;
pub mod json;
pub mod matrix;
pub mod pfaffian;
pub mod poly;
pub mod ratfun;
pub mod sample;
pub mod scalar;
pub mod second_variation;
pub mod superconformal;
pub mod supermatrix;
pub mod symplectic;

pub use error::{Error, Result};
pub use scalar::{Field, QAlgebra, Rational, Ring};

/// Grassmann elements with rational coefficients.
pub type Gr = grassmann::GrassmannElt<Rational>;
/// Rational polynomials.
pub type QPoly = poly::Poly<Rational>;
