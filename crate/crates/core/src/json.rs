//! JSON request and response types for the command-line front end.
//!
//! Rationals are strings (`"-3/4"`). A Grassmann element is either a plain
//! rational string or `{"terms": [{"indices": [1, 2], "coeff": "1/2"}]}`
//! with 1-based generator indices; unsorted indices pick up the sign of the
//! sorting permutation. Coordinate maps and series use the text form of
//! [`SuperFn::parse`].

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{Blade, GrassmannElt, Shape};
use crate::hyperelliptic::{
    a_xi_matrix, massey_m3_with, restrict, skew_part, skew_part_balanced, full_skew_operator, HyperellipticConfig,
    MasseySign, QuadraticRelation, ThetaCoord, validate_config,
};
use crate::matrix::{rank_exact, Matrix};
use crate::pfaffian::{pf, pf_adjugate, SkewMatrix};
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::second_variation::{second_variation, tangent_map, SubspaceFamily};
use crate::superconformal::{
    compose, factorize, pullback_form, SuperCoordMap, SuperFn, ZSeries, DEFAULT_DEGREE_CAP,
};
use crate::supermatrix::{ber, Dims, SuperMatrix};

/// Schema version written into every response.
pub const SCHEMA_VERSION: u32 = 1;

type G = GrassmannElt<Rational>;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Term {
    pub indices: Vec<usize>,
    pub coeff: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Scalar(String),
    Grassmann { terms: Vec<Term> },
}

impl Entry {
    pub fn to_elt(&self, shape: Shape) -> Result<G> {
        match self {
            Entry::Scalar(s) => Ok(G::constant(shape, parse_rational(s)?)),
            Entry::Grassmann { terms } => {
                let mut out = G::zero_in(shape);
                for t in terms {
                    if t.indices.iter().any(|&i| i == 0 || i > shape.generators) {
                        return Err(Error::Parse(format!(
                            "generator indices must lie in 1..={}",
                            shape.generators
                        )));
                    }
                    let zero_based: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
                    let (blade, negative) = Blade::from_indices(&zero_based)
                        .ok_or_else(|| Error::Parse(format!("repeated generator in {:?}", t.indices)))?;
                    let c = parse_rational(&t.coeff)?;
                    out = out + G::from_terms(shape, [(blade, if negative { -c } else { c })]);
                }
                Ok(out)
            }
        }
    }

    pub fn from_elt(x: &G) -> Self {
        if x.nilpotent_part().is_zero() {
            return Entry::Scalar(format_rational(&x.constant_term()));
        }
        Entry::Grassmann {
            terms: x
                .terms()
                .iter()
                .map(|(b, c)| Term { indices: b.indices().iter().map(|i| i + 1).collect(), coeff: format_rational(c) })
                .collect(),
        }
    }
}

fn read_matrix(rows: &[Vec<Entry>], shape: Shape) -> Result<Matrix<G>> {
    let parsed = rows.iter().map(|r| r.iter().map(|e| e.to_elt(shape)).collect()).collect::<Result<Vec<Vec<G>>>>()?;
    if parsed.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    Matrix::from_rows(parsed)
}

fn write_matrix(m: &Matrix<G>) -> Vec<Vec<Entry>> {
    m.to_rows().iter().map(|r| r.iter().map(Entry::from_elt).collect()).collect()
}

fn shape_of(generators: usize) -> Result<Shape> {
    if generators > 16 {
        return Err(Error::InvalidInput(format!("{generators} generators is beyond the supported 16")));
    }
    Ok(Shape::full(generators))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PfaffianInput {
    #[serde(default)]
    pub generators: usize,
    pub matrix: Vec<Vec<Entry>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PfaffianOutput {
    pub version: u32,
    pub pfaffian: Entry,
    pub adjugate: Vec<Vec<Entry>>,
}

pub fn run_pfaffian(input: &PfaffianInput) -> Result<PfaffianOutput> {
    let m = read_matrix(&input.matrix, shape_of(input.generators)?)?;
    let s = SkewMatrix::new(m)?;
    Ok(PfaffianOutput {
        version: SCHEMA_VERSION,
        pfaffian: Entry::from_elt(&pf(&s)?),
        adjugate: write_matrix(&pf_adjugate(&s)?),
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BerezinianInput {
    #[serde(default)]
    pub generators: usize,
    pub dims: Dims,
    pub matrix: Vec<Vec<Entry>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BerezinianOutput {
    pub version: u32,
    pub berezinian: Entry,
}

pub fn run_berezinian(input: &BerezinianInput) -> Result<BerezinianOutput> {
    let m = read_matrix(&input.matrix, shape_of(input.generators)?)?;
    let sm = SuperMatrix::new(input.dims, input.dims, m)?;
    Ok(BerezinianOutput { version: SCHEMA_VERSION, berezinian: Entry::from_elt(&ber(&sm)?) })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MasseyInput {
    pub config: HyperellipticConfig,
    pub relation: QuadraticRelation,
    /// Defaults to `e_1⁺`.
    #[serde(default)]
    pub theta: Option<ThetaCoord>,
    #[serde(default)]
    pub sign: MasseySign,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MasseyOutput {
    pub version: u32,
    pub sym: String,
    pub antisym: String,
    pub sym_coeffs: Vec<String>,
    pub antisym_coeffs: Vec<String>,
    pub restriction: ThetaCoord,
}

fn checked_relation(cfg: &HyperellipticConfig, rel: &QuadraticRelation) -> Result<()> {
    validate_config(cfg)?;
    QuadraticRelation::new(rel.pairs.clone())?;
    rel.check_degrees(cfg.g)
}

pub fn run_massey(input: &MasseyInput) -> Result<MasseyOutput> {
    checked_relation(&input.config, &input.relation)?;
    let y = input.theta.clone().unwrap_or_else(|| ThetaCoord::basis(input.config.g - 1, 0));
    let m = massey_m3_with(&input.config, &y, &input.relation, input.sign)?;
    Ok(MasseyOutput {
        version: SCHEMA_VERSION,
        sym: m.sym.to_string(),
        antisym: m.antisym.to_string(),
        sym_coeffs: m.sym.to_strings(),
        antisym_coeffs: m.antisym.to_strings(),
        restriction: restrict(&input.config, &m),
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SkewInput {
    pub config: HyperellipticConfig,
    pub relation: QuadraticRelation,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SkewOutput {
    pub version: u32,
    pub a_plus: Vec<Vec<String>>,
    pub a_minus: Vec<Vec<String>>,
    pub skew_part: Vec<Vec<String>>,
    pub balanced: Vec<Vec<String>>,
    pub rank: usize,
    pub operator_rank: usize,
}

pub fn run_skew(input: &SkewInput) -> Result<SkewOutput> {
    checked_relation(&input.config, &input.relation)?;
    let (plus, minus) = a_xi_matrix(&input.config, &input.relation);
    let skew = skew_part(&input.config, &input.relation);
    Ok(SkewOutput {
        version: SCHEMA_VERSION,
        a_plus: plus.to_string_rows(),
        a_minus: minus.to_string_rows(),
        rank: rank_exact(&skew),
        skew_part: skew.to_string_rows(),
        balanced: skew_part_balanced(&input.config, &input.relation).to_string_rows(),
        operator_rank: rank_exact(&full_skew_operator(&input.config, &input.relation)),
    })
}

/// A coordinate map in text form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MapText {
    pub z: String,
    pub theta: String,
}

impl MapText {
    pub fn parse(&self, shape: Shape, cap: usize) -> Result<SuperCoordMap> {
        SuperCoordMap::new(SuperFn::parse(&self.z, shape)?, SuperFn::parse(&self.theta, shape)?, cap)
    }

    pub fn of(m: &SuperCoordMap) -> Self {
        MapText { z: m.z_image.to_string(), theta: m.theta_image.to_string() }
    }
}

fn series_text(a: &ZSeries) -> String {
    SuperFn::from_base(a.clone()).to_string()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComposeInput {
    pub generators: usize,
    #[serde(default)]
    pub cap: Option<usize>,
    pub g: MapText,
    pub h: MapText,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComposeOutput {
    pub version: u32,
    pub map: MapText,
    pub superconformal: bool,
    pub lambda: String,
}

pub fn run_compose(input: &ComposeInput) -> Result<ComposeOutput> {
    let shape = shape_of(input.generators)?;
    let cap = input.cap.unwrap_or(DEFAULT_DEGREE_CAP);
    let c = compose(&input.g.parse(shape, cap)?, &input.h.parse(shape, cap)?)?;
    let report = pullback_form(&c)?;
    Ok(ComposeOutput {
        version: SCHEMA_VERSION,
        map: MapText::of(&c),
        superconformal: report.ok,
        lambda: report.lambda.to_string(),
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FactorizeInput {
    pub generators: usize,
    #[serde(default)]
    pub cap: Option<usize>,
    pub map: MapText,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FactorizeOutput {
    pub version: u32,
    pub f: String,
    pub phi: String,
}

pub fn run_factorize(input: &FactorizeInput) -> Result<FactorizeOutput> {
    let shape = shape_of(input.generators)?;
    let m = input.map.parse(shape, input.cap.unwrap_or(DEFAULT_DEGREE_CAP))?;
    let (f, phi) = factorize(&m)?;
    Ok(FactorizeOutput { version: SCHEMA_VERSION, f: series_text(&f), phi: series_text(&phi) })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SecondVariationInput {
    pub generators: usize,
    /// `n x r` generator matrix of the family.
    pub matrix: Vec<Vec<Entry>>,
    /// First-order even deformations of the generators, quotiented out.
    #[serde(default)]
    pub even_directions: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClassJson {
    /// 1-based generator indices `[i, j]`, `i < j`.
    pub pair: [usize; 2],
    pub raw: Vec<Vec<String>>,
    /// 0-based `(row, col)` positions spanning the complement.
    pub complement: Vec<[usize; 2]>,
    pub values: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SecondVariationOutput {
    pub version: u32,
    pub pivot_rows: Vec<usize>,
    pub quotient_rows: Vec<usize>,
    /// One `(n - r) x r` matrix per generator.
    pub tangent: Vec<Vec<Vec<String>>>,
    pub classes: Vec<ClassJson>,
}

pub fn run_second_variation(input: &SecondVariationInput) -> Result<SecondVariationOutput> {
    let m = read_matrix(&input.matrix, shape_of(input.generators)?)?;
    let dirs = input
        .even_directions
        .iter()
        .map(|d| Matrix::from_string_rows(d))
        .collect::<Result<Vec<_>>>()?;
    let fam = SubspaceFamily::new(input.generators, &m)?.with_even_directions(dirs)?;
    let sv = second_variation(&fam);
    Ok(SecondVariationOutput {
        version: SCHEMA_VERSION,
        pivot_rows: fam.pivot_rows().to_vec(),
        quotient_rows: fam.quotient_rows().to_vec(),
        tangent: tangent_map(&fam).iter().map(|t| t.to_string_rows()).collect(),
        classes: sv
            .pairs
            .iter()
            .zip(&sv.raw)
            .zip(&sv.classes)
            .map(|((&(i, j), raw), c)| ClassJson {
                pair: [i + 1, j + 1],
                raw: raw.to_string_rows(),
                complement: c.complement.iter().map(|&(r, c)| [r, c]).collect(),
                values: c.values.iter().map(format_rational).collect(),
            })
            .collect(),
    })
}

/// Machine-readable error body.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ErrorJson {
    pub version: u32,
    pub error: String,
    pub message: String,
}

impl ErrorJson {
    pub fn of(e: &Error) -> Self {
        let dbg = format!("{e:?}");
        let kind = dbg.split(['(', ' ']).next().unwrap_or("Error").to_string();
        ErrorJson { version: SCHEMA_VERSION, error: kind, message: e.to_string() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Entry {
        Entry::Scalar(x.into())
    }

    #[test]
    fn pfaffian_of_standard_block() {
        let out =
            run_pfaffian(&PfaffianInput { generators: 0, matrix: vec![vec![s("0"), s("1")], vec![s("-1"), s("0")]] })
                .unwrap();
        assert_eq!(out.pfaffian, s("1"));
    }

    #[test]
    fn berezinian_of_diagonal() {
        let out = run_berezinian(&BerezinianInput {
            generators: 0,
            dims: Dims::new(1, 1),
            matrix: vec![vec![s("2"), s("0")], vec![s("0"), s("3")]],
        })
        .unwrap();
        assert_eq!(out.berezinian, s("2/3"));
    }

    #[test]
    fn grassmann_entry_round_trip() {
        let e = Entry::Grassmann {
            terms: vec![
                Term { indices: vec![], coeff: "1".into() },
                Term { indices: vec![2, 1], coeff: "3".into() },
            ],
        };
        let x = e.to_elt(Shape::full(2)).unwrap();
        let back = Entry::from_elt(&x);
        assert_eq!(back.to_elt(Shape::full(2)).unwrap(), x);
        assert_eq!(x.coeff(Blade(0b11)), Rational::from_integer((-3).into()));
        assert!(Entry::Grassmann { terms: vec![Term { indices: vec![3], coeff: "1".into() }] }
            .to_elt(Shape::full(2))
            .is_err());
    }

    #[test]
    fn error_kind_names() {
        assert_eq!(ErrorJson::of(&Error::NotSkew).error, "NotSkew");
        assert_eq!(ErrorJson::of(&Error::OddSize(3)).error, "OddSize");
    }
}
