//! Crate-wide error type.
//!
//! The variants mirror the failure classes surfaced by the CLI: misuse of an
//! API contract, unparseable input, a structurally illegal expression or
//! decomposition, an exhausted enumeration budget, and cost overflow.
//! An illegal expression detected *semantically* (the FAIL outcome of
//! materialization) is deliberately not an error; see [`crate::expr`].

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition of an operation was violated (mismatched semirings,
    /// unknown elements, measure incompatible with a command, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// Input text could not be parsed. `line` is 1-based; 0 means the
    /// location is not line-addressable.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A structural legality rule was violated: overlapping join domains,
    /// mismatched uplus domains, an invalid (nice) tree decomposition, or a
    /// malformed k-expression.
    #[error("legality error: {0}")]
    Legality(String),

    /// An enumeration or materialization budget was exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// 64-bit cost arithmetic overflowed. Costs are exact; overflow is
    /// reported, never wrapped.
    #[error("cost overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn legality(msg: impl Into<String>) -> Self {
        Error::Legality(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }
}
