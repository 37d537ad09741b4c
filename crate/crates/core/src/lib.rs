//! Shannon entropies and signed transmission (multivariate mutual
//! information) among three or four nominal variables.
//!
//! The pipeline is: parse case records ([`ingest`]), count them into a sparse
//! [`ContingencyTable`] ([`tables`]), then compute
//!
//! - every entropy and transmission of the table ([`infocalc`]),
//! - the maximum-entropy fit under two-way margins and the information added
//!   by the three-way interaction ([`maxent`]),
//! - a group-wise split of a transmission into within- and between-group
//!   parts ([`decompose`]).
//!
//! All values are in bits.
//!
//! ```
//! use synergy_core::{full_report, parse_dataset, ContingencyTable, DimSet};
//!
//! let ds = parse_dataset(
//!     [
//!         r#""id1", "1", "b", "region1", "2""#,
//!         r#""id2", "2", "a", "region2", "1""#,
//!         r#""id3", "1", "a", "region2", "2""#,
//!         r#""id4", "1", "b", "region5", "1""#,
//!     ],
//!     "example",
//! )?;
//! let report = full_report(&ContingencyTable::from_dataset(&ds))?;
//! let t = report.t("wxz".parse::<DimSet>()?).unwrap();
//! assert!((t + 0.1887).abs() < 1e-4);
//! # Ok::<(), synergy_core::Error>(())
//! ```
//!
//! With the default `parallel` feature, table building, report assembly and
//! decomposition use rayon. Results are bit-identical either way.

pub mod decompose;
pub mod dims;
pub mod error;
pub mod infocalc;
pub mod ingest;
pub mod maxent;
pub mod tables;

pub use decompose::{
    decompose_by_dimension, decompose_external, decompose_table_by_dimension, decompose_tables,
    DecompositionResult, GroupContribution,
};
pub use dims::{Arity, Dim, DimSet, MAX_ARITY};
pub use error::{Error, ErrorKind, Result};
pub use infocalc::{conditional_transmission, entropy, full_report, transmission, EntropyReport};
pub use ingest::{parse_dataset, parse_line, read_dataset, CaseRecord, Dataset, RecordReader};
pub use maxent::{
    interaction_entropy_difference, ipf_fit, ipf_fit_subset, krippendorff_interaction,
    redundancy_bits, IpfOptions, IpfResult,
};
pub use tables::{ContingencyTable, MarginalTable, TableBuilder};
