use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("curve functions live on different curves")]
    ModulusMismatch,
    #[error("modulus polynomial is not squarefree")]
    NotSquarefree,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("element is not unipotent (constant term must be 1 and the element even)")]
    NotUnipotent,
    #[error("Pfaffian requested for odd size {0}")]
    OddSize(usize),
    #[error("entry ({0}, {1}) breaks the required parity")]
    NotHomogeneous(usize, usize),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("subspaces are not transversal")]
    NotTransversal,
    #[error("isotropic subspace is not contained in the first Lagrangian")]
    NotContained,
    #[error("pairing with the isotropic subspace is not surjective")]
    SurjectivityFail,
    #[error("morphism is not symmetric for the induced duality")]
    NotSymmetric,
    #[error("odd rank {0} is already even")]
    EvenAlready(usize),
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("derivative of the even series is not 1 + nilpotent")]
    NotUnipotentDerivative,
    #[error("series is not odd")]
    NotOdd,
    #[error("z-degree {0} exceeds the configured cap {1}")]
    DegreeOverflow(usize, usize),
    #[error("map is not superconformal")]
    NotSuperconformal,
    #[error("duplicate value {0}")]
    DuplicateBranch(String),
    #[error("zero point {0} collides with a branch point")]
    ZeroCollision(String),
    #[error("Massey product is not regular at b = {0}")]
    RegularityFail(String),
    #[error("polynomial degree {0} exceeds the bound {1}")]
    DegreeTooHigh(usize, usize),
    #[error("invalid quadratic relation: {0}")]
    InvalidRelation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
