use thiserror::Error;

use crate::geometry::NormSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("packing density unavailable for {0}; supply one explicitly")]
    PackingDensityUnavailable(NormSpec),

    #[error("invalid function profile: {0}")]
    InvalidProfile(String),

    #[error("root finder did not converge: {0}")]
    NonConvergence(String),

    #[error("threshold undefined: packing density is 1, so the ratio is identically 1")]
    ThresholdUndefined,

    #[error("invalid density model: {0}")]
    InvalidModel(String),

    #[error("exact computation unavailable (budget of {budget} nodes exceeded), use bounds")]
    BudgetExceeded { budget: u64 },

    #[error("iteration cap of {0} exceeded")]
    IterationCap(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
