use thiserror::Error;

/// Errors raised by constructors, parsers and the invariant checks that run
/// inside the constructive algorithms.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid perfect matching: {0}")]
    InvalidMatching(String),

    #[error("connection is missing the parallel transport of edge ({0}, {1})")]
    MissingTransport(usize, usize),

    #[error("connection entry ({i}, {j}) is inconsistent with its reverse")]
    InconsistentTransport { i: usize, j: usize },

    /// An identity that holds for every zero-column-sum matrix failed while
    /// an algorithm was running. Carries a human readable witness.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
