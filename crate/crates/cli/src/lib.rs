//! Command-line experiment runner.
//!
//! Every subcommand takes its parameters as flags or from a `key=value`
//! config file (`--config`), with flags winning. Results go to `--out` (or
//! stdout) as CSV with a `#` metadata header, or as JSON with a `meta` block.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
pub mod config;
pub mod output;

pub use output::{read_curve, write_curve};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] dynperc::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "dynperc", version, about = "Random walks on dynamical Erdos-Renyi percolation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one trajectory and write its event log.
    Simulate(SimulateArgs),
    /// Structure report of one G(n, lambda/n) sample.
    Structure(StructureArgs),
    /// Coalescence tail curve of the four-step coupling.
    Couple(CoupleArgs),
    /// TV-to-equilibrium curve.
    Mix(MixArgs),
    /// Giant anatomy sampler against direct G(n, lambda/n) draws.
    Anatomy(AnatomyArgs),
    /// Exact small-n checks from the generator.
    Oracle(OracleArgs),
}

/// Flags shared by every subcommand; never part of the recorded config.
#[derive(Debug, Clone, Args, Default)]
pub struct Io {
    /// Output file; relative paths resolve against $DYNPERC_OUT_DIR if set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plain-text `key=value` file of defaults for the other flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    Stationary,
    AllOpen,
    AllClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetArg {
    Walk,
    FullSystem,
    EnvironmentCount,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1)]
    pub walkers: usize,
    #[arg(long, value_enum, default_value_t = InitArg::Stationary)]
    pub init: InitArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub io: Io,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StructureArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub c_star: f64,
    #[arg(long, default_value_t = 20.0)]
    pub big_c_star: f64,
    /// Depth of the far-from-core profile; defaults to the largest valid one.
    #[arg(long)]
    pub omega: Option<usize>,
    /// Also require the isolated-vertex fraction clause.
    #[arg(long)]
    pub with_isolated: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub io: Io,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoupleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub io: Io,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MixArgs {
    #[arg(long, value_enum, default_value_t = TargetArg::Walk)]
    pub target: TargetArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Walker start vertex; uniform when omitted.
    #[arg(long)]
    pub start_vertex: Option<usize>,
    #[arg(long, value_enum, default_value_t = InitArg::Stationary)]
    pub init: InitArg,
    #[command(flatten)]
    #[serde(skip)]
    pub io: Io,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnatomyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 200)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-replica statistics CSV; defaults to `--out` with a `.csv` extension.
    #[arg(long)]
    #[serde(skip)]
    pub stats_out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub io: Io,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub mu: f64,
    /// Times at which to tabulate TV from (vertex 0, all closed).
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub io: Io,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code: 0 on success, 2 on usage errors, 1 on run failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = std::time::Instant::now();
    match commands::dispatch(&cli.command) {
        Ok(()) => {
            eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
