use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A documented precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Lookup of an unknown catalog entry.
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    /// Expression or literal parse error, with a byte position into the source.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Malformed input data (JSON schemas, index ranges, ...).
    #[error("schema error: {0}")]
    Schema(String),

    /// A Taylor component was requested outside the domain on which it is defined.
    #[error("component unavailable: {0}")]
    ComponentUnavailable(String),

    /// A computation would exceed the fixed resource budget.
    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),

    /// No consistent normalization exists; this falsifies the implementation.
    #[error("calibration failure: {0}")]
    Calibration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
