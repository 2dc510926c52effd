use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("containment violation: {0}")]
    ContainmentViolation(String),
    #[error("operands live in different ambient groups")]
    AmbientMismatch,
    #[error("map is not well defined; offending element {witness:?}")]
    NotWellDefined { witness: Vec<BigInt> },
    #[error("element is not in the image")]
    Absent,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
