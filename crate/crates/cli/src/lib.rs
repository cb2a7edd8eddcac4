//! `hqlab` command-line frontend. The binary is a thin wrapper around
//! [`run_from`].
//!
//! Exit codes: 0 on success, 2 for usage or data errors, 3 for numerical
//! failures inside the kernels.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hqlab::lr_select::{select_subset, SelectionMode};
use hqlab::overestimation::{overestimation_probability, threshold, threshold_bounds};
use hqlab::simlab::{lil_experiment, run_config_text, ExperimentReport, GeneratorKind, GeneratorSpec, NoiseKind};
use hqlab::{ar_select, Dataset, Error, Penalty, Query, Series};

mod render;

const THREADS_ENV: &str = "HQLAB_THREADS";

#[derive(Parser)]
#[command(name = "hqlab", version, about = "Information-criterion model selection laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Nested,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Noise {
    Gaussian,
    Uniform,
    Laplace,
    Rademacher,
}

#[derive(Subcommand)]
enum Command {
    /// Select regressors from a `y,x1,...,xm` CSV file.
    SelectLr {
        dataset: PathBuf,
        #[arg(long, default_value = "bic")]
        penalty: String,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate the order of an AR series (one value per line).
    SelectAr {
        series: PathBuf,
        #[arg(long, default_value = "bic")]
        penalty: String,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Overestimation probability for a superset with `dk` extra regressors.
    OverestProb {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dk: usize,
        #[arg(long)]
        penalty: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a Monte Carlo experiment described by a JSON config.
    Simulate {
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the nested RSS statistic with the dk·ln ln n band along growing paths.
    LilCheck {
        #[arg(long, default_value_t = 1)]
        dk: usize,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        paths: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coefficients of the true regressors.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, value_enum, default_value_t = Noise::Gaussian)]
        noise: Noise,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lab(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lab(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lab(Error::Io(e))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lab(e) if e.is_numeric_failure() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let msg = match self {
            CliError::Usage(m) => m.clone(),
            CliError::Lab(e) => e.to_string(),
        };
        // diagnostics are kept to one line
        write!(f, "{}", msg.replace('\n', " "))
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run_from<I, A>(args: I) -> u8
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return u8::try_from(e.exit_code()).unwrap_or(2);
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(CliError::Lab(Error::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::SelectLr {
            dataset,
            penalty,
            mode,
            format,
            output,
        } => {
            let pen = Penalty::parse(&penalty)?;
            let ds = Dataset::read_csv_path(&dataset)?;
            let mode = match mode {
                Mode::Exhaustive => SelectionMode::Exhaustive,
                Mode::Nested => SelectionMode::Nested,
            };
            let result = select_subset(&ds, &pen, mode)?;
            write_output(output.as_deref(), |w| render::selection(&result, format, w))
        }
        Command::SelectAr {
            series,
            penalty,
            kmax,
            format,
            output,
        } => {
            let pen = Penalty::parse(&penalty)?;
            let s = Series::read_text_path(&series)?;
            let result = ar_select::select_ar_order(&s, &pen, kmax)?;
            write_output(output.as_deref(), |w| render::order_selection(&result, format, w))
        }
        Command::OverestProb { n, dk, penalty, format } => {
            let pen = Penalty::parse(&penalty)?;
            if n == 0 {
                return Err(CliError::Usage("--n must be >= 1".into()));
            }
            let d_n = pen.evaluate(n)?;
            let q = Query::new(n as f64, dk, d_n)?;
            let (lower, upper) = threshold_bounds(&q);
            let values = render::OverestValues {
                n,
                dk,
                penalty: pen.to_string(),
                d_n,
                threshold: threshold(&q),
                lower_bound: lower,
                upper_bound: upper,
                probability: overestimation_probability(&q),
            };
            write_output(None, |w| render::overest(&values, format, w))
        }
        Command::Simulate {
            config,
            seed,
            format,
            output,
        } => {
            configure_threads()?;
            let text = std::fs::read_to_string(&config)?;
            let report = run_config_text(&text, seed)?;
            emit_report(&report, format, output.as_deref())
        }
        Command::LilCheck {
            dk,
            grid,
            paths,
            seed,
            mut alpha,
            sigma,
            noise,
            format,
            output,
        } => {
            configure_threads()?;
            alpha.extend(std::iter::repeat_n(0.0, dk));
            let kind = match noise {
                Noise::Gaussian => GeneratorKind::LrGaussian { alpha, sigma },
                other => GeneratorKind::LrNonGaussian {
                    alpha,
                    sigma,
                    noise: match other {
                        Noise::Uniform => NoiseKind::Uniform,
                        Noise::Laplace => NoiseKind::Laplace,
                        _ => NoiseKind::Rademacher,
                    },
                },
            };
            let spec = GeneratorSpec::new(kind, seed)?;
            let report = lil_experiment(&spec, dk, &grid, paths)?;
            emit_report(&report, format, output.as_deref())
        }
    }
}

fn emit_report(report: &ExperimentReport, format: Format, output: Option<&Path>) -> Result<(), CliError> {
    write_output(output, |w| match format {
        Format::Json | Format::Text => w.write_all(report.to_json()?.as_bytes()).map_err(Into::into),
        Format::Csv => report.write_csv(w).map_err(Into::into),
    })?;
    let stderr = io::stderr();
    let mut err = stderr.lock();
    for line in report.summary_lines() {
        writeln!(err, "{line}")?;
    }
    Ok(())
}

fn write_output(
    path: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}
