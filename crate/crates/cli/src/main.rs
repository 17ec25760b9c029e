//! `bqc`: command-line front end of the library.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numeric or
//! I/O failure, 3 a `--check` found a value outside its window.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use bqc::io::CONFIG_KEYS;

#[derive(Debug, Parser)]
#[command(name = "bqc", version, about = "Stratified Couette flow laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate weights and multipliers, or sample a lemma's ratio.
    Weights(WeightsArgs),
    /// Norms of an ensemble of linear modes.
    Linear(LinearArgs),
    /// Growth of the two-mode toy model.
    Toy(ToyArgs),
    /// Run the nonlinear pseudo-spectral solver.
    Simulate(SimulateArgs),
    /// Fit power-law exponents to a diagnostics CSV.
    Rates(RatesArgs),
    /// Run a Cartesian sweep of simulations.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    /// `k,eta0:eta1:n,t0:t1:n`
    #[arg(long, conflicts_with = "lemma", allow_hyphen_values = true)]
    pub tabulate: Option<String>,
    /// Lemma id, e.g. dtw-4.4.
    #[arg(long)]
    pub lemma: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Weight parameter override `key=value` (beta, s, lambda0, ...).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LinearArgs {
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 64.0)]
    pub eta_max: f64,
    #[arg(long, default_value_t = 2048)]
    pub n_eta: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1,1")]
    pub k_set: Vec<i64>,
    /// Width of the Gaussian initial vorticity in eta.
    #[arg(long, default_value_t = 4.0)]
    pub width: f64,
    /// Initial density as a multiple of the vorticity.
    #[arg(long, default_value_t = 0.0)]
    pub theta_factor: f64,
    #[arg(long, default_value_t = 20.0)]
    pub t0: f64,
    #[arg(long, default_value_t = 2000.0)]
    pub t1: f64,
    /// Output times, geometrically spaced on [t0, t1].
    #[arg(long, default_value_t = 41)]
    pub n_times: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Fit window `lo:hi`; defaults to [t0, t1].
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare the fitted exponents with -1/2, -1/2, -3/2, 1/2, 1/2.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct ToyArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
    pub sigmas: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value = "boussinesq")]
    pub model: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Check the gamma = 2 envelopes and the stability of the endpoint exponent.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override `key=value`, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub adaptive: bool,
    #[arg(long)]
    pub linear_only: bool,
    /// Fit window for `--check`, `lo:hi`; defaults to [10, t_end].
    #[arg(long)]
    pub window: Option<String>,
    /// Check the fitted exponents and the energy balance.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    /// Diagnostics CSV written by `simulate`.
    pub csv: PathBuf,
    #[arg(long)]
    pub window: String,
    /// Columns to fit; defaults to the five L2 norms.
    #[arg(long, value_delimiter = ',')]
    pub norms: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Swept key `key=v1,v2,...`; repeat for more axes, the first varies slowest.
    #[arg(long = "axis", required = true)]
    pub axes: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
    #[arg(long, default_value = "10:50")]
    pub window: String,
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn keys_help() -> String {
    let mut s = String::from("Configuration keys (key = value, # starts a comment):\n");
    for (k, d, what) in CONFIG_KEYS {
        s.push_str(&format!("  {k:<15} default {d:<20} {what}\n"));
    }
    s
}

/// Failure classes, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Check(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let keys = keys_help();
    let cmd = Cli::command()
        .after_long_help(keys.clone())
        .mut_subcommand("simulate", |c| c.after_long_help(keys.clone()))
        .mut_subcommand("sweep", |c| c.after_long_help(keys.clone()));
    let cli = match cmd
        .try_get_matches()
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let res = match cli.command {
        Command::Weights(a) => commands::weights(a),
        Command::Linear(a) => commands::linear(a),
        Command::Toy(a) => commands::toy(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Rates(a) => commands::rates(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) | CliError::Numeric(m) | CliError::Check(m) => m,
            };
            eprintln!("bqc: {msg}");
            ExitCode::from(e.code())
        }
    }
}
