use thiserror::Error;

use crate::lp::LpStatus;

/// Errors raised by the quantum primitives and the capacity engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state vector is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("Kraus operators are not trace preserving (max entry deviation of sum A^dag A from I is {defect:e})")]
    NotTracePreserving { defect: f64 },

    #[error("POVM elements do not sum to the identity (max entry deviation {0:e})")]
    IncompletePovm(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("linear program terminated with status {0:?}")]
    Lp(LpStatus),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
