use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("expected a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix data has {found} entries, expected {expected}")]
    BadShape { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("matrix is not hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension {0} is odd; equivalent-to-real pairs need an even dimension")]
    OddDimension(usize),

    #[error(
        "not a set of mutually unbiased bases: worst error {worst:.3e} at bases ({}, {}), columns ({}, {})",
        .location.0, .location.1, .location.2, .location.3
    )]
    NotMub {
        worst: f64,
        location: (usize, usize, usize, usize),
    },

    #[error("columns ({i}, {j}) of block {block} are not a GER pair")]
    NotGer { block: usize, i: usize, j: usize },

    #[error("pairs {0} and {1} share a column in the same block")]
    OverlappingSlots(usize, usize),

    #[error("slots {0} and {1} cannot carry independent phases simultaneously (deviation {2:.3e})")]
    IncompatibleSlots(usize, usize, f64),

    #[error("Gram matrix has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("matrix is not the Gram matrix of its first block row (deviation {0:.3e})")]
    NotGram(f64),

    #[error("Gram matrix is not positive semidefinite (smallest eigenvalue {0:.3e})")]
    NotPositiveSemidefinite(f64),

    #[error("expected {expected} parameters, got {found}")]
    ParameterCount { expected: usize, found: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("row {row} out of range for dimension {dim}")]
    RowOutOfRange { row: usize, dim: usize },

    #[error("family does not match assignment: {0}")]
    SlotMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
