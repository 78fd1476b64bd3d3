use thiserror::Error;

/// Domain and usage errors raised by the network model and its generators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("neuron index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("matrix must have at least one row")]
    Empty,

    #[error("value {re}{im:+}i is not a quadrant state")]
    NotQuadrant { re: f64, im: f64 },

    #[error("visit order is not a permutation of 0..{n}")]
    InvalidPermutation { n: usize },

    #[error("state code {code} out of range for n = {n}")]
    CodeOutOfRange { code: u64, n: usize },

    #[error("n = {n} exceeds the exhaustive limit of {limit}")]
    OracleLimit { n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
