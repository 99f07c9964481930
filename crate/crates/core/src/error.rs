use std::collections::BTreeMap;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<String>, right: Vec<String> },

    #[error("state budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },

    /// The missing-configuration bound is larger than the requested cap.
    /// `partial` holds the moduli that were tested before giving up.
    #[error("missing-configuration bound {bound} exceeds cap {cap}")]
    BoundExceeded { bound: usize, cap: usize, partial: BTreeMap<usize, bool> },

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("alphabet needs at least {needed} symbols, has {actual}")]
    AlphabetTooSmall { needed: usize, actual: usize },

    #[error("prefix table would exceed {limit} words")]
    SizeExceeded { limit: usize },

    #[error("depth mismatch: {0}")]
    DepthMismatch(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("cannot parse word literal {literal:?}: {reason}")]
    WordSyntax { literal: String, reason: String },

    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal consistency check failed. This always indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AlphabetMismatch { .. } => "AlphabetMismatch",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::EmptySet => "EmptySet",
            Error::AlphabetTooSmall { .. } => "AlphabetTooSmall",
            Error::SizeExceeded { .. } => "SizeExceeded",
            Error::DepthMismatch(_) => "DepthMismatch",
            Error::InvalidAlphabet(_) => "InvalidAlphabet",
            Error::UnknownSymbol(_) => "UnknownSymbol",
            Error::WordSyntax { .. } => "WordSyntax",
            Error::MalformedPresentation(_) => "MalformedPresentation",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Inconsistent(_) => "Inconsistent",
        }
    }
}
