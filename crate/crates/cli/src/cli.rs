use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Closest efficient targets, maximal reference sets and returns to scale
/// for a CSV of decision-making units.
#[derive(Debug, Parser)]
#[command(name = "dea-closest", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Radial scores and the efficient set only.
    Efficiency(RunArgs),
    /// Scores plus the closest target of every unit.
    Project(RunArgs),
    /// Targets plus the maximal closest reference sets.
    Mcrs(RunArgs),
    /// Targets plus returns to scale at each target.
    Rts(RunArgs),
    /// Everything above.
    Report(RunArgs),
}

impl Command {
    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Efficiency(a)
            | Command::Project(a)
            | Command::Mcrs(a)
            | Command::Rts(a)
            | Command::Report(a) => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Efficiency(_) => "efficiency",
            Command::Project(_) => "project",
            Command::Mcrs(_) => "mcrs",
            Command::Rts(_) => "rts",
            Command::Report(_) => "report",
        }
    }

    pub fn sections(&self) -> Sections {
        let (projection, reference_set, rts) = match self {
            Command::Efficiency(_) => (false, false, false),
            Command::Project(_) => (true, false, false),
            Command::Mcrs(_) => (true, true, false),
            Command::Rts(_) => (true, false, true),
            Command::Report(_) => (true, true, true),
        };
        Sections {
            projection,
            reference_set,
            rts,
        }
    }
}

/// Which per-unit blocks a command computes and prints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sections {
    pub projection: bool,
    pub reference_set: bool,
    pub rts: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// CSV with header `dmu,in:<name>...,out:<name>...`.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,

    /// Slack order for the lexicographic projection, e.g. `out:y,in:x`.
    #[arg(long, value_name = "SPEC", default_value = "default")]
    pub priority: String,

    /// Linking constant of the indicator rows.
    #[arg(long = "big-m", value_name = "X", allow_negative_numbers = true)]
    pub big_m: Option<f64>,

    /// Threshold below which scores, weights and intercepts count as zero.
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub tol: Option<f64>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Also write frontier, points and projection arrows (one input, one output only).
    #[arg(long = "plot-data", value_name = "FILE")]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}
