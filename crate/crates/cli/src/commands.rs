//! The subcommands. Each writes its human-readable output to `out` and
//! returns an error carrying the exit code on failure.

use crate::error::{exit, CliError, Result};
use crate::output::{append_row, csv_record, fixed, number, RunRow};
use serde::Serialize;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use synergy_core::{
    decompose_table_by_dimension, full_report, ipf_fit_subset, redundancy_bits, transmission,
    ContingencyTable, DecompositionResult, Dim, DimSet, EntropyReport, Error, IpfOptions,
    RecordReader, TableBuilder,
};

/// Options shared by every subcommand that reads a case file.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReadOptions {
    pub drop_empty_labels: bool,
}

/// Streams a case file into a table.
pub fn load_table(path: &Path, opts: ReadOptions) -> Result<ContingencyTable> {
    let input_err = |source| CliError::Input {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = RecordReader::new(BufReader::new(file));
    let mut builder: Option<TableBuilder> = None;
    for rec in reader.by_ref() {
        let rec = rec.map_err(input_err)?;
        if opts.drop_empty_labels && rec.has_empty_label() {
            continue;
        }
        builder
            .get_or_insert_with(|| TableBuilder::new(rec.arity()))
            .push_record(&rec)
            .map_err(input_err)?;
    }
    match builder {
        Some(b) if b.total() > 0 => Ok(b.finish()),
        _ => Err(input_err(Error::EmptyDataset(path.display().to_string()))),
    }
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

#[derive(Clone, Debug)]
pub struct ReportArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    pub label: Option<String>,
    pub precision: usize,
    pub json: bool,
    pub full_precision: bool,
    pub read: ReadOptions,
}

#[derive(Serialize)]
struct LabelledReport<'a> {
    label: &'a str,
    #[serde(flatten)]
    report: &'a EntropyReport,
}

/// Prints the entropy/transmission listing in report order.
pub fn write_listing(
    out: &mut dyn Write,
    label: &str,
    report: &EntropyReport,
    precision: usize,
) -> Result<()> {
    writeln!(
        out,
        "{label}: {} cases, {} variables",
        report.n_cases(),
        report.arity()
    )?;
    writeln!(out, "Entropy and Transmission values in bits of information")?;
    for (s, v) in report.entropies() {
        writeln!(out, "H({s})\t{}", fixed(v, precision))?;
    }
    for (s, v) in report.transmissions() {
        writeln!(out, "T({s})\t{}", fixed(v, precision))?;
    }
    Ok(())
}

/// Computes the full report for one file and appends its row.
pub fn report(args: &ReportArgs, out: &mut dyn Write) -> Result<RunRow> {
    let table = load_table(&args.input, args.read)?;
    let report = full_report(&table)?;
    let label = args
        .label
        .clone()
        .unwrap_or_else(|| file_label(&args.input));
    let row = RunRow::from_report(&label, &report);
    let csv_precision = (!args.full_precision).then_some(args.precision);
    append_row(&args.output, &RunRow::header_line(), &row.csv_line(csv_precision)?)?;

    if args.json {
        serde_json::to_writer_pretty(
            &mut *out,
            &LabelledReport {
                label: &label,
                report: &report,
            },
        )?;
        writeln!(out)?;
    } else {
        write_listing(out, &label, &report, args.precision)?;
    }
    Ok(row)
}

#[derive(Clone, Debug)]
pub struct BatchArgs {
    pub inputs: Vec<String>,
    pub output: PathBuf,
    pub keep_going: bool,
    pub precision: usize,
    pub full_precision: bool,
    pub read: ReadOptions,
}

/// Expands files, directories (their regular, non-hidden files) and glob
/// patterns, sorted by file name and then by full path.
pub fn expand_inputs(inputs: &[String]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for arg in inputs {
        let path = Path::new(arg);
        if path.is_dir() {
            let entries = std::fs::read_dir(path).map_err(|e| CliError::io(path, e))?;
            for entry in entries {
                let entry = entry.map_err(|e| CliError::io(path, e))?;
                let p = entry.path();
                let hidden = entry.file_name().to_string_lossy().starts_with('.');
                if p.is_file() && !hidden {
                    files.push(p);
                }
            }
        } else if path.exists() {
            files.push(path.to_path_buf());
        } else if arg.contains(['*', '?', '[']) {
            let paths = glob::glob(arg)
                .map_err(|e| CliError::Usage(format!("bad pattern `{arg}`: {e}")))?;
            for p in paths {
                let p = p.map_err(|e| CliError::io(e.path().to_path_buf(), e.into()))?;
                if p.is_file() {
                    files.push(p);
                }
            }
        } else {
            return Err(CliError::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
            ));
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()).then_with(|| a.cmp(b)));
    files.dedup();
    Ok(files)
}

/// Outcome of a batch run.
#[derive(Debug, Default)]
pub struct BatchSummary {
    pub written: usize,
    pub failed: Vec<(PathBuf, CliError)>,
}

/// One row per input file, appended in file-name order. Files are computed
/// concurrently; rows are written sequentially.
pub fn batch(args: &BatchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<BatchSummary> {
    let files = expand_inputs(&args.inputs)?;
    if files.is_empty() {
        return Err(CliError::Usage("no input files matched".into()));
    }
    let compute = |path: &PathBuf| -> Result<RunRow> {
        let table = load_table(path, args.read)?;
        Ok(RunRow::from_report(file_label(path), &full_report(&table)?))
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Result<RunRow>> = {
        use rayon::prelude::*;
        files.par_iter().map(compute).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<RunRow>> = files.iter().map(compute).collect();

    let csv_precision = (!args.full_precision).then_some(args.precision);
    let header = RunRow::header_line();
    let mut summary = BatchSummary::default();
    for (path, row) in files.into_iter().zip(rows) {
        match row {
            Ok(row) => {
                append_row(&args.output, &header, &row.csv_line(csv_precision)?)?;
                writeln!(
                    out,
                    "{}\t{} cases\tT(WXY) {}\tT(WXYZ) {}",
                    row.label,
                    row.n_cases,
                    fixed(row.t[6], args.precision),
                    fixed(row.t[10], args.precision),
                )?;
                summary.written += 1;
            }
            Err(e) if args.keep_going => {
                writeln!(err, "warning: skipped {e}")?;
                summary.failed.push((path, e));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(summary)
}

#[derive(Clone, Debug)]
pub struct DecomposeArgs {
    pub input: PathBuf,
    pub group_by: Dim,
    pub subset: DimSet,
    pub output: Option<PathBuf>,
    pub precision: usize,
    pub full_precision: bool,
    pub json: bool,
    pub read: ReadOptions,
}

pub const DECOMPOSITION_COLUMNS: [&str; 7] = [
    "row",
    "label",
    "n_cases",
    "weight",
    "t_bits",
    "contribution",
    "minus_contribution",
];

/// Rows of the decomposition table: one per group, then `pooled` and
/// `between` summaries.
pub fn decomposition_rows(r: &DecompositionResult, precision: Option<usize>) -> Vec<[String; 7]> {
    let num = |x: f64| number(x, precision);
    let mut rows: Vec<[String; 7]> = r
        .groups
        .iter()
        .map(|g| {
            [
                "group".to_string(),
                g.group_label.clone(),
                g.n_cases.to_string(),
                num(g.weight),
                num(g.t_group),
                num(g.contribution),
                num(g.reduction()),
            ]
        })
        .collect();
    rows.push([
        "pooled".into(),
        String::new(),
        r.n_cases().to_string(),
        num(1.0),
        num(r.t_pooled),
        String::new(),
        String::new(),
    ]);
    rows.push([
        "between".into(),
        String::new(),
        String::new(),
        String::new(),
        num(r.t_between),
        String::new(),
        String::new(),
    ]);
    rows
}

pub fn decompose(args: &DecomposeArgs, out: &mut dyn Write) -> Result<DecompositionResult> {
    let table = load_table(&args.input, args.read)?;
    let result = decompose_table_by_dimension(&table, args.group_by, args.subset)?;

    if let Some(path) = &args.output {
        let precision = (!args.full_precision).then_some(args.precision);
        let mut text = csv_record(&DECOMPOSITION_COLUMNS)?;
        for row in decomposition_rows(&result, precision) {
            text.push_str(&csv_record(&row)?);
        }
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    }

    if args.json {
        serde_json::to_writer_pretty(&mut *out, &result)?;
        writeln!(out)?;
    } else {
        writeln!(
            out,
            "T({}) grouped by {}, {} cases, bits",
            result.subset,
            args.group_by,
            result.n_cases()
        )?;
        writeln!(out, "{}", DECOMPOSITION_COLUMNS.join("\t"))?;
        for row in decomposition_rows(&result, Some(args.precision)) {
            writeln!(out, "{}", row.join("\t"))?;
        }
    }
    Ok(result)
}

#[derive(Clone, Debug)]
pub struct IpfArgs {
    pub input: PathBuf,
    pub subset: DimSet,
    pub options: IpfOptions,
    pub precision: usize,
    pub json: bool,
    pub read: ReadOptions,
}

#[derive(Clone, Debug, Serialize)]
pub struct IpfSummary {
    pub subset: String,
    pub interaction_bits: f64,
    pub transmission_bits: f64,
    /// Interaction bits minus the three-way transmission. Experimental.
    pub redundancy_bits_experimental: Option<f64>,
    pub iterations: usize,
    pub max_margin_error: f64,
    pub converged: bool,
}

/// Fits, prints the summary, and fails with the non-convergence exit code
/// if the fit did not reach its tolerance.
pub fn ipf(args: &IpfArgs, out: &mut dyn Write) -> Result<IpfSummary> {
    let table = load_table(&args.input, args.read)?;
    if args.subset.len() != 3 {
        return Err(CliError::Usage(format!(
            "--subset needs exactly 3 dimensions, got {}",
            args.subset
        )));
    }
    let fit = ipf_fit_subset(&table, args.subset, args.options)?;
    let projected = table.project3(args.subset)?;
    let summary = IpfSummary {
        subset: args.subset.to_string(),
        interaction_bits: fit.interaction_bits,
        transmission_bits: transmission(&table, args.subset)?,
        redundancy_bits_experimental: redundancy_bits(&projected, &fit).ok(),
        iterations: fit.iterations,
        max_margin_error: fit.max_margin_error,
        converged: fit.converged,
    };

    if args.json {
        serde_json::to_writer_pretty(&mut *out, &summary)?;
        writeln!(out)?;
    } else {
        let p = args.precision;
        writeln!(out, "Maximum-entropy fit of {} under two-way margins", summary.subset)?;
        writeln!(out, "interaction_bits\t{}", fixed(summary.interaction_bits, p))?;
        writeln!(out, "transmission_bits\t{}", fixed(summary.transmission_bits, p))?;
        match summary.redundancy_bits_experimental {
            Some(r) => writeln!(out, "redundancy_bits (experimental)\t{}", fixed(r, p))?,
            None => writeln!(out, "redundancy_bits (experimental)\tn/a")?,
        }
        writeln!(out, "iterations\t{}", summary.iterations)?;
        writeln!(out, "max_margin_error\t{:e}", summary.max_margin_error)?;
        writeln!(out, "converged\t{}", if summary.converged { "yes" } else { "no" })?;
    }
    if !fit.converged {
        return Err(CliError::Core(Error::NotConverged {
            iterations: fit.iterations,
            max_margin_error: fit.max_margin_error,
        }));
    }
    Ok(summary)
}

/// Maps a result to a process exit code, reporting errors on `err`.
pub fn finish<T>(result: Result<T>, err: &mut dyn Write) -> i32 {
    match result {
        Ok(_) => exit::SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
