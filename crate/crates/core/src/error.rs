use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("incompatible lattices: {0}")]
    IncompatibleLattices(String),

    #[error("adjoint entry ({row}, {col}) is not integral")]
    DivisibilityFailure { row: String, col: String },

    #[error("`{0}` is not a mutable direction")]
    FrozenDirection(String),

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("generalized mutation needs exactly 2 mutable labels, found {0}")]
    UnsupportedRank(usize),

    #[error("exact division failed: {0}")]
    ExactDivisionFailure(String),

    #[error("path mismatch: {0}")]
    PathMismatch(String),

    #[error("states do not share a root seed")]
    RootMismatch,

    #[error("invalid quantum datum: {0}")]
    InvalidQuantumDatum(String),

    #[error("invalid Hom matrix: {0}")]
    InvalidHomMatrix(String),

    #[error("`{0}` is not a frozen label")]
    NotFrozen(String),

    #[error("growth limit exceeded: {0}")]
    GrowthLimit(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
