use thiserror::Error;

/// Errors raised by the chain, propagator and revival-construction routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcrError {
    #[error("invalid spin magnitude {0}: 2S must be a positive integer")]
    InvalidSpin(f64),
    #[error("invalid chain geometry: {0}")]
    InvalidGeometry(String),
    #[error("site {site} out of range 1..={sites}")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("basis index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("digit sequence has length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("local level {level} at site {site} exceeds local dimension {local_dim}")]
    LevelOutOfRange {
        site: usize,
        level: usize,
        local_dim: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator is not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),
    #[error("eigendecomposition failed to converge")]
    EigenFailure,
    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),
    #[error("unsupported chain specification: {0}")]
    Unsupported(String),
    #[error(
        "degenerate dynamics: constraint matrix is singular or ill-conditioned (condition estimate {condition:e})"
    )]
    DegenerateDynamics { condition: f64 },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("need at least {needed} levels, got {got}")]
    TooFewLevels { needed: usize, got: usize },
    #[error("zero matrix has no participation ratio")]
    ZeroMatrix,
}

pub type Result<T> = std::result::Result<T, AcrError>;
