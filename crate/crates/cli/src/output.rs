//! Fixed-point display and the per-run CSV row.

use crate::error::{CliError, Result};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use synergy_core::{Arity, DimSet, EntropyReport};

/// Rounds half away from zero to `precision` decimals. Never prints `-0`.
pub fn fixed(x: f64, precision: usize) -> String {
    let scale = 10f64.powi(precision as i32);
    let mut r = (x * scale).round() / scale;
    if r == 0.0 {
        r = 0.0;
    }
    format!("{r:.precision$}")
}

/// `fixed` at `Some(precision)`, shortest round-trip form at `None`.
pub fn number(x: f64, precision: Option<usize>) -> String {
    match precision {
        Some(p) => fixed(x, p),
        None => format!("{x}"),
    }
}

/// One line of the results file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub label: String,
    pub n_cases: u64,
    pub arity: Arity,
    /// Entropies in `H_W ... H_WXYZ` order.
    pub h: [f64; 15],
    /// Transmissions in `T_WX ... T_WXYZ` order.
    pub t: [f64; 11],
}

impl RunRow {
    pub fn from_report(label: impl Into<String>, report: &EntropyReport) -> Self {
        let mut h = [0.0; 15];
        let mut t = [0.0; 11];
        for (slot, (_, v)) in h.iter_mut().zip(report.entropies()) {
            *slot = v;
        }
        for (slot, (_, v)) in t.iter_mut().zip(report.transmissions()) {
            *slot = v;
        }
        RunRow {
            label: label.into(),
            n_cases: report.n_cases(),
            arity: report.arity(),
            h,
            t,
        }
    }

    pub fn columns() -> Vec<String> {
        let mut cols = vec!["label".to_string(), "n_cases".into(), "arity".into()];
        cols.extend(DimSet::report_order().iter().map(|s| format!("H_{s}")));
        cols.extend(EntropyReport::transmission_order().map(|s| format!("T_{s}")));
        cols
    }

    pub fn header_line() -> String {
        format!("{}\n", Self::columns().join(","))
    }

    /// The row as one LF-terminated CSV line; values rounded to `precision`
    /// decimals unless it is `None`.
    pub fn csv_line(&self, precision: Option<usize>) -> Result<String> {
        let mut fields = vec![
            self.label.clone(),
            self.n_cases.to_string(),
            self.arity.to_string(),
        ];
        fields.extend(self.h.iter().chain(&self.t).map(|&v| number(v, precision)));
        csv_record(&fields)
    }
}

/// Encodes one CSV record with LF termination.
pub fn csv_record<S: AsRef<[u8]>>(fields: &[S]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(fields)?;
    let bytes = w.into_inner().map_err(|e| CliError::Stdout(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("fields are UTF-8"))
}

/// Appends `line` to the CSV at `path`, creating it with `header` first if
/// it is missing or empty. Header and row go out in a single write. An
/// existing file must start with `header`.
pub fn append_row(path: &Path, header: &str, line: &str) -> Result<()> {
    let mut file = OpenOptions::new()
        .read(true)
        .append(true)
        .create(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    let len = file.metadata().map_err(|e| CliError::io(path, e))?.len();
    let payload = if len == 0 {
        format!("{header}{line}")
    } else {
        let mut first = String::new();
        BufReader::new(&file)
            .read_line(&mut first)
            .map_err(|e| CliError::io(path, e))?;
        if first != header {
            return Err(CliError::HeaderMismatch {
                path: path.to_path_buf(),
            });
        }
        line.to_string()
    };
    file.write_all(payload.as_bytes())
        .map_err(|e| CliError::io(path, e))
}
