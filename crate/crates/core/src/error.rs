use thiserror::Error;

use crate::goodmatrix::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("element {value} is out of range for a field of order {order}")]
    ElementOutOfRange { value: u64, order: u64 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid pair ({i}, {j}) for dimension {b}")]
    InvalidPair { i: usize, j: usize, b: usize },

    #[error("the zero vector does not identify a 1-subspace")]
    ZeroVector,

    #[error("vector is not normalized (leftmost nonzero entry must be 1)")]
    NotNormalized,

    #[error("coordinate {index} of the node vector is zero")]
    ZeroCoordinate { index: usize },

    #[error("vectors span the same 1-subspace")]
    DependentVectors,

    #[error("linear system is inconsistent (coefficient rank {rank})")]
    Inconsistent { rank: usize },

    #[error("file has length {got}, expected B = {expected}")]
    WrongFileLength { expected: usize, got: usize },

    #[error("nodes {first} and {second} span the same 1-subspace")]
    DuplicateDirection { first: usize, second: usize },

    #[error("unrepairable: {0}")]
    Unrepairable(String),

    #[error("failed nodes {0:?} are outside the span of the helpers")]
    OutsideSpan(Vec<usize>),

    #[error("node set has rank {rank}, need {needed} independent nodes")]
    DependentNodes { rank: usize, needed: usize },

    #[error("invalid good matrix: {0:?}")]
    InvalidGoodMatrix(Vec<Violation>),

    #[error("invalid system parameters: {0}")]
    InvalidParameters(String),

    #[error("enumeration of {needed} cases exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid modification: {0}")]
    InvalidDiff(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
