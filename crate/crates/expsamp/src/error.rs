//! Crate-wide error type.
//!
//! Numerical routines report recoverable failures (bad domains, invalid
//! configuration, unusable truncation policies) through [`Error`]; plain
//! floating-point overflow is deliberately *not* an error and propagates as
//! `inf`/`NaN` in the usual IEEE way.

use thiserror::Error;

/// Errors produced by kernel, signal, operator, and CLI routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (e.g. evaluation at `x <= 0`, a kernel order of zero).
    #[error("domain error: {0}")]
    Domain(String),

    /// A kernel description could not be validated or parsed.
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    /// A signal description could not be validated or parsed.
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    /// A numeric parameter (bandwidth, quadrature order, grid size, ...)
    /// fails validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested truncation policy cannot be applied to this kernel.
    #[error("truncation policy not applicable: {0}")]
    Truncation(String),

    /// Finite differencing was requested at (or too close to) a breakpoint,
    /// where the signal is not smooth.
    #[error("non-smooth point: {0}")]
    NonSmoothPoint(String),

    /// The operation is not available for this combination of inputs.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A CLI argument or spec string could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
