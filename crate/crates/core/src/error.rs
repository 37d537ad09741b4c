use crate::dims::{Dim, DimSet};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad classes of failure, used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or empty input data.
    Parse,
    /// Invalid arguments: bad dimension sets, arity mismatches.
    Usage,
    /// Iterative fitting stopped before reaching its tolerance.
    NotConverged,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Format { line: u64, message: String },

    #[error("line {line}: found {found} variables, but line {first_line} has {expected}")]
    MixedArity {
        first_line: u64,
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("{0}: no case records")]
    EmptyDataset(String),

    #[error("dimension set must not be empty")]
    EmptySubset,

    #[error("dimension {dim} is out of range for {arity} variables")]
    DimensionOutOfRange { dim: Dim, arity: usize },

    #[error("{subset} has {len} dimensions, need {expected}")]
    SubsetSize {
        subset: DimSet,
        len: usize,
        expected: &'static str,
    },

    #[error("unknown dimension `{0}`, expected one of w, x, y, z")]
    UnknownDimension(String),

    #[error("dimensions must be distinct")]
    DimensionsNotDistinct,

    #[error("arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },

    #[error("group dimension {0} must not appear in the decomposed subset")]
    GroupDimInSubset(Dim),

    #[error("table has no cases")]
    EmptyTable,

    #[error("cross-product of alphabets has {cells} cells, limit is {limit}")]
    TooManyCells { cells: u128, limit: usize },

    #[error(
        "iterative proportional fitting did not converge after {iterations} iterations \
         (max margin error {max_margin_error:e})"
    )]
    NotConverged {
        iterations: usize,
        max_margin_error: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Format { .. } | Error::MixedArity { .. } | Error::EmptyDataset(_) => {
                ErrorKind::Parse
            }
            Error::NotConverged { .. } => ErrorKind::NotConverged,
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Usage,
        }
    }

    pub(crate) fn format(line: u64, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
