//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Arithmetic on two truncated series with different truncation orders.
    #[error("truncation orders differ: ({0}, {1}) vs ({2}, {3})")]
    TruncationMismatch(usize, usize, usize, usize),

    /// Möbius function queried on a pair that is not a refinement pair.
    #[error("set partitions are not comparable in the refinement order")]
    NotRefinement,

    /// A q-factorial factor vanishes at the requested evaluation point.
    #[error("q-factorial vanishes at the evaluation point ([{c}] = 0)")]
    QFactorialZero { c: usize },

    /// An exactness assumption failed; this signals an arithmetic bug, not
    /// bad input.
    #[error("internal consistency: {0}")]
    Inconsistency(String),

    /// Invalid argument or malformed data.
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },

    /// Malformed CSV input.
    #[error("csv parse error at line {line}: {msg}")]
    Csv { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            why: why.into(),
        }
    }
}
