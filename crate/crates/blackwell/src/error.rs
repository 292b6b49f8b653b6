//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by toolkit operations.
///
/// Construction errors carry a human-readable detail string; solver errors
/// name the routine that gave up so callers can report it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid measurement: {0}")]
    InvalidPovm(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("iteration limit reached in {0}")]
    IterationLimit(&'static str),
    #[error("channel output is not commutative: {0}")]
    NotClassicalOutput(String),
    #[error("verdict is ambiguous: {0}")]
    Ambiguous(String),
}

pub type Result<T> = std::result::Result<T, Error>;
