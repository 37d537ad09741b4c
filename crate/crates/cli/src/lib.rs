//! Library side of the `th4` command: argument-independent implementations
//! of the `report`, `batch`, `decompose` and `ipf` subcommands, plus the
//! results-file format.
//!
//! The results file is CSV with a fixed header,
//! `label,n_cases,arity,H_W,...,H_WXYZ,T_WX,...,T_WXYZ`, and one row is
//! appended per run. Three-variable runs carry zeros in every column that
//! involves `Z`.

pub mod commands;
pub mod error;
pub mod output;

pub use error::{exit, CliError};
pub use output::RunRow;
