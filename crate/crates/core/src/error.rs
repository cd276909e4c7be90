use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Precondition,
    SizeGuard,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot decompose a target of zero")]
    ZeroTarget,

    #[error("epsilon {epsilon} times target {target} is below one; no integer part fits the cap")]
    EpsilonTooSmall { target: u64, epsilon: String },

    #[error("epsilon must lie in (0, 1], got {0}")]
    EpsilonOutOfRange(String),

    #[error("query {query} is outside [0, {target}]")]
    QueryOutOfRange { query: i128, target: u64 },

    #[error("no sub-multiset of the parts sums to {0}")]
    Unreachable(u64),

    #[error("{what} has {size} entries, above the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("lifted weight {weight} exceeds epsilon * budget = {cap}; rebuild in refined mode")]
    WeightsTooLarge { weight: f64, cap: f64 },

    #[error("solver requires a monotone objective")]
    NotMonotone,

    #[error("point is infeasible: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::TooLarge { .. } => ErrorKind::SizeGuard,
            _ => ErrorKind::Precondition,
        }
    }

    pub(crate) fn too_large(what: &'static str, size: u128, limit: u128) -> Self {
        Error::TooLarge { what, size, limit }
    }
}
