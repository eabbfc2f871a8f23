use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
mod inline;
mod output;

/// Exit status for invalid input.
const EXIT_VALIDATION: u8 = 2;
/// Exit status for numerical failures.
const EXIT_NUMERICAL: u8 = 3;
/// Exit status when a witness search comes back empty.
const EXIT_NO_WITNESS: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] unimodal::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        use unimodal::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_VALIDATION,
            CliError::Core(e) => match e {
                E::Parse(_) | E::Validation { .. } | E::Domain(_) | E::Bracket(_) | E::Hypothesis(_) => {
                    EXIT_VALIDATION
                }
                E::Quadrature { .. } | E::Inversion { .. } | E::WindowTooSmall { .. } | E::DegenerateProfile => {
                    EXIT_NUMERICAL
                }
                E::NoWitness { .. } => EXIT_NO_WITNESS,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "unimodal", version, about = "Densities and unimodality of processes started from a measure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the density at time t as CSV.
    Density(DensityArgs),
    /// Count the modes of the density at time t.
    Modes(ModesArgs),
    /// Locate the time from which the density stays unimodal.
    CriticalTime(CriticalTimeArgs),
    /// Check unimodality above a theorem's sufficient time.
    Threshold(ThresholdArgs),
    /// Build a truncated never-unimodal measure and certify a witness.
    Counterexample(CounterexampleArgs),
    /// Modality verdicts over a list of times, as CSV.
    Sweep(SweepArgs),
    /// Search dilated Bernoulli laws for a free bimodal profile with matching Cauchy level sets.
    WitnessSearch(WitnessSearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Process {
    Gaussian,
    Cauchy,
    Levy,
    Free,
}

impl From<Process> for unimodal::ProcessKind {
    fn from(p: Process) -> Self {
        match p {
            Process::Gaussian => unimodal::ProcessKind::ClassicalGaussian,
            Process::Cauchy => unimodal::ProcessKind::Cauchy,
            Process::Levy => unimodal::ProcessKind::LevyHalf,
            Process::Free => unimodal::ProcessKind::FreeSemicircle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Weight {
    One,
    ExpSquare,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct MeasureSource {
    /// Inline measure, e.g. `bernoulli:1`, `uniform:-1,1`, `atomic:0@0.5,1@0.5`.
    #[arg(long, allow_hyphen_values = true)]
    pub measure: Option<String>,
    /// Measure JSON document.
    #[arg(long)]
    pub measure_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub source: MeasureSource,
    #[arg(long, value_enum)]
    pub process: Process,
    #[arg(long)]
    pub t: f64,
    /// Number of points.
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,
    /// `lo,hi` for classical processes; defaults to the padded support hull.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModesArgs {
    #[command(flatten)]
    pub source: MeasureSource,
    #[arg(long, value_enum)]
    pub process: Process,
    #[arg(long)]
    pub t: f64,
    /// Scan points (classical) or profile points (free).
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CriticalTimeArgs {
    #[command(flatten)]
    pub source: MeasureSource,
    #[arg(long, value_enum)]
    pub process: Process,
    /// `t_min,t_max`.
    #[arg(long, default_value = "0.01,100")]
    pub bracket: String,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub source: MeasureSource,
    /// free_4D2, classical_gaussian_tail, cauchy_third_moment or levy_diameter.
    #[arg(long)]
    pub theorem: String,
    /// Optional; must match the theorem's process.
    #[arg(long, value_enum)]
    pub process: Option<Process>,
    /// Number of verification times above the bound.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Explicit verification times instead of the default ladder.
    #[arg(long)]
    pub t_list: Option<String>,
    /// Exponent ε of the Gaussian tail functional.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, value_enum)]
    pub process: Process,
    #[arg(long)]
    pub a: Option<f64>,
    /// Number of atoms.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, value_enum)]
    pub f: Option<Weight>,
    #[arg(long, conflicts_with = "t_list")]
    pub t: Option<f64>,
    #[arg(long)]
    pub t_list: Option<String>,
    /// Also write the generated measure as JSON.
    #[arg(long)]
    pub emit_measure: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: MeasureSource,
    #[arg(long, value_enum)]
    pub process: Process,
    /// Strictly increasing, comma-separated times.
    #[arg(long)]
    pub t_list: String,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessSearchArgs {
    /// Bernoulli scales s, searched in order.
    #[arg(long, default_value = "0.5,1,2")]
    pub scales: String,
    /// Times tried for each scale.
    #[arg(long, default_value = "0.5,1,2,3")]
    pub t_list: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Density(a) => commands::density(a),
        Command::Modes(a) => commands::modes(a),
        Command::CriticalTime(a) => commands::critical_time(a),
        Command::Threshold(a) => commands::threshold(a),
        Command::Counterexample(a) => commands::counterexample(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::WitnessSearch(a) => commands::witness_search(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
