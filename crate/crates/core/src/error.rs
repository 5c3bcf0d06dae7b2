use thiserror::Error;

/// Errors raised by state construction, measure evaluation and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("rank {rank} is outside 1..={dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("not Hermitian (max |a_jk - conj(a_kj)| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state vector is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("Kraus operators are not trace preserving (max deviation {0:e})")]
    NotTracePreserving(f64),

    #[error("Kraus operators exceed the identity (min eigenvalue of I - sum K^dag K = {0:e})")]
    NotSubnormalized(f64),

    #[error("operation requires a trace-preserving channel")]
    NotAChannel,

    #[error("probability {0} is outside {1}")]
    InvalidProbability(f64, &'static str),

    #[error("Tsallis parameter {0} is outside [0,1) U (1,2]")]
    InvalidAlpha(f64),

    #[error("dimension {dim} exceeds the supported cap {cap} for {what}")]
    DimensionTooLarge {
        dim: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("point ({0}, {1}) lies outside the unit disk")]
    OutsideUnitDisk(f64, f64),

    #[error("solver did not converge after {iterations} iterations (best value {best}, gap estimate {gap:e})")]
    NotConverged {
        best: f64,
        gap: f64,
        iterations: usize,
    },

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("uncertainty principle violated: min eigenvalue of V + i Omega is {0:e}")]
    Uncertainty(f64),

    #[error("complete-positivity condition violated: min eigenvalue {0:e}")]
    NotCompletelyPositive(f64),

    #[error("symplectic eigenvalue pairing failed (relative mismatch {0:e})")]
    SymplecticPairing(f64),

    #[error("argument {value} is below 1 for g(x)")]
    BelowOne { value: f64 },

    #[error("probe state is not thermal")]
    NotThermal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
