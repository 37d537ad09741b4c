use clap::{Args, Parser, Subcommand};
use std::io::{self, Write};
use std::path::PathBuf;
use synergy_cli::commands::{
    self, BatchArgs, DecomposeArgs, IpfArgs, ReadOptions, ReportArgs,
};
use synergy_cli::{exit, CliError};
use synergy_core::{Dim, DimSet, IpfOptions};

/// Entropies and mutual information in two, three and four dimensions
/// among nominal case records.
#[derive(Debug, Parser)]
#[command(name = "th4", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute all entropies and transmissions for one file and append a row.
    Report {
        #[arg(long, default_value = "data.txt")]
        input: PathBuf,
        #[arg(long, default_value = "th4.csv")]
        output: PathBuf,
        /// Row label; defaults to the input file name.
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        display: Display,
        /// Print the full-precision report as JSON instead of the listing.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        read: Read,
    },
    /// Run `report` over many files, one row each, in file-name order.
    Batch {
        /// Files, directories or glob patterns.
        #[arg(required = true)]
        inputs: Vec<String>,
        #[arg(long, default_value = "th4.csv")]
        output: PathBuf,
        /// Warn about files that fail and continue with the rest.
        #[arg(long)]
        keep_going: bool,
        #[command(flatten)]
        display: Display,
        #[command(flatten)]
        read: Read,
    },
    /// Split a transmission into per-group contributions.
    Decompose {
        #[arg(long, default_value = "data.txt")]
        input: PathBuf,
        /// Dimension whose labels define the groups.
        #[arg(long, value_parser = parse_dim)]
        group_by: Dim,
        /// Dimensions of the transmission, e.g. `wxz`.
        #[arg(long, value_parser = parse_dims)]
        subset: DimSet,
        /// Also write the table as CSV.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        display: Display,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        read: Read,
    },
    /// Maximum-entropy fit under the two-way margins of three dimensions.
    Ipf {
        #[arg(long, default_value = "data.txt")]
        input: PathBuf,
        /// Three dimensions, e.g. `wxy`.
        #[arg(long, value_parser = parse_dims, default_value = "wxy")]
        subset: DimSet,
        #[arg(long, default_value_t = IpfOptions::default().tolerance)]
        tolerance: f64,
        #[arg(long, default_value_t = IpfOptions::default().max_iterations)]
        max_iter: usize,
        #[arg(long, default_value_t = 2)]
        precision: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        read: Read,
    },
}

#[derive(Debug, Args)]
struct Display {
    /// Decimals shown on stdout and stored in CSV.
    #[arg(long, default_value_t = 2)]
    precision: usize,
    /// Store unrounded values in CSV.
    #[arg(long)]
    full_precision: bool,
}

#[derive(Debug, Args)]
struct Read {
    /// Skip records that contain an empty label.
    #[arg(long)]
    drop_empty_labels: bool,
}

impl From<Read> for ReadOptions {
    fn from(r: Read) -> Self {
        ReadOptions {
            drop_empty_labels: r.drop_empty_labels,
        }
    }
}

fn parse_dim(s: &str) -> Result<Dim, String> {
    s.parse().map_err(|e: synergy_core::Error| e.to_string())
}

fn parse_dims(s: &str) -> Result<DimSet, String> {
    s.parse().map_err(|e: synergy_core::Error| e.to_string())
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Report {
            input,
            output,
            label,
            display,
            json,
            read,
        } => {
            let args = ReportArgs {
                input,
                output,
                label,
                precision: display.precision,
                json,
                full_precision: display.full_precision,
                read: read.into(),
            };
            commands::finish(commands::report(&args, out), err)
        }
        Command::Batch {
            inputs,
            output,
            keep_going,
            display,
            read,
        } => {
            let args = BatchArgs {
                inputs,
                output,
                keep_going,
                precision: display.precision,
                full_precision: display.full_precision,
                read: read.into(),
            };
            let result = commands::batch(&args, out, err).map(|summary| {
                if !summary.failed.is_empty() {
                    let _ = writeln!(
                        err,
                        "{} of {} files written",
                        summary.written,
                        summary.written + summary.failed.len()
                    );
                }
            });
            commands::finish(result, err)
        }
        Command::Decompose {
            input,
            group_by,
            subset,
            output,
            display,
            json,
            read,
        } => {
            let args = DecomposeArgs {
                input,
                group_by,
                subset,
                output,
                precision: display.precision,
                full_precision: display.full_precision,
                json,
                read: read.into(),
            };
            commands::finish(commands::decompose(&args, out), err)
        }
        Command::Ipf {
            input,
            subset,
            tolerance,
            max_iter,
            precision,
            json,
            read,
        } => {
            if tolerance.is_nan() || tolerance <= 0.0 {
                return commands::finish::<()>(
                    Err(CliError::Usage("--tolerance must be positive".into())),
                    err,
                );
            }
            let args = IpfArgs {
                input,
                subset,
                options: IpfOptions {
                    tolerance,
                    max_iterations: max_iter,
                },
                precision,
                json,
                read: read.into(),
            };
            commands::finish(commands::ipf(&args, out), err)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr();
    let code = run(cli, &mut out, &mut err);
    let _ = out.flush();
    if code != exit::SUCCESS {
        std::process::exit(code);
    }
}
