//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by domain violations, corrupt data, and bad configuration.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// An increment exceeds `v * delta` beyond tolerance, so the sample
    /// cannot come from a telegraph path with the stated speed.
    #[error("corrupt sample: |increment {index}| = {eta:e} exceeds v*delta = {bound:e}")]
    CorruptSample {
        /// Index of the offending increment (1-based, matching `X_i - X_{i-1}`).
        index: usize,
        /// Magnitude of the offending increment.
        eta: f64,
        /// The finite-velocity bound `v * delta`.
        bound: f64,
    },

    /// A sample with no increments was supplied.
    #[error("sample holds no increments")]
    EmptySample,

    /// An experiment or tolerance configuration is invalid.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
