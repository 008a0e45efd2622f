use thiserror::Error;

use crate::capacity::CapacityResult;
use crate::channel::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed channel document: {0}")]
    Parse(String),

    #[error("channel failed validation: {}", .0.summary())]
    Validation(ValidationReport),

    #[error("index out of range: {what} = {index} (size {size})")]
    Index {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("alphabet too large: {what} has {size} letters, cap is {cap}")]
    AlphabetTooLarge {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("unsupported state-information model: {0}")]
    UnsupportedModel(String),

    #[error("unsupported coding regime: {0}")]
    UnsupportedRegime(String),

    #[error("no convergence after {} iterations (gap {:?})", .0.method.iterations, .0.certified_gap)]
    NoConvergence(Box<CapacityResult>),

    #[error("protocol precondition failed: {0}")]
    PrecondFailed(String),

    #[error("search space of {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
