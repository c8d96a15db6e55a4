use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (dimension mismatches, bad
    /// committees, invalid parameters).
    #[error("input error: {0}")]
    Input(String),

    /// Text that does not parse as an election, table, or rule spec.
    #[error("parse error: {0}")]
    Parse(String),

    /// The requested operation is undefined for this rule (e.g. the
    /// separable fast path on a non-separable rule).
    #[error("unsupported rule: {0}")]
    UnsupportedRule(String),

    /// A forward shift that is not legal in the given vote.
    #[error("invalid shift: {0}")]
    InvalidShift(String),

    /// A value left its allowed range (e.g. negative scores after an affine
    /// transform).
    #[error("range error: {0}")]
    Range(String),

    /// The request exceeds a hard resource cap (e.g. ζ-elections above m = 8).
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
