use std::io;
use std::path::PathBuf;
use synergy_core::ErrorKind;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// I/O and other runtime failures.
    pub const FAILURE: i32 = 1;
    /// Bad arguments. Matches clap's own usage-error code.
    pub const USAGE: i32 = 2;
    /// Malformed or empty input data.
    pub const PARSE: i32 = 3;
    /// Iterative fitting did not reach its tolerance.
    pub const NOT_CONVERGED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: synergy_core::Error,
    },

    #[error(transparent)]
    Core(#[from] synergy_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Stdout(io::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{}: existing header does not match this tool's columns", path.display())]
    HeaderMismatch { path: PathBuf },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        let kind = match self {
            CliError::Input { source, .. } | CliError::Core(source) => source.kind(),
            CliError::Usage(_) => ErrorKind::Usage,
            _ => ErrorKind::Io,
        };
        match kind {
            ErrorKind::Parse => exit::PARSE,
            ErrorKind::Usage => exit::USAGE,
            ErrorKind::NotConverged => exit::NOT_CONVERGED,
            ErrorKind::Io => exit::FAILURE,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Stdout(e)
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
