use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Simulator and regime checker for regularized Navier-Stokes and MHD models
/// on the periodic torus.
///
/// Tables go to standard output; data files go to the output directory
/// (`--out`, else `$REGFLOW_OUT/<name>`, else `regflow-out/<name>`).
/// `<name>` is the subcommand, or the experiment kind for sweep and determine.
///
/// Exit status: 0 success, 2 configuration error or refused model,
/// 3 numerical blow-up, 4 failed experiment assertion, 1 anything else.
#[derive(Parser, Debug)]
#[command(name = "regflow", version, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate one model and write its diagnostics, snapshots and spectrum.
    Simulate(SimulateArgs),
    /// Check every theorem's hypotheses for one model.
    Regime(RegimeArgs),
    /// Run an α-sweep, inviscid-limit, absorbing-ball or twin-run experiment.
    Sweep(SweepArgs),
    /// Find how many low modes determine the long-time dynamics.
    Determine(DetermineArgs),
    /// Shell energy spectrum of a snapshot or of generated initial data.
    Spectrum(SpectrumArgs),
    /// List the preset models and their exponents.
    Presets(PresetsArgs),
}

/// Model selection. Values given here override those of a config file.
#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Preset name (NSE, Leray-alpha, ML-alpha, SBM, NSV, NS-alpha,
    /// "NS-alpha-like(θ,θ2)", MHD, Leray-alpha-MHD, MHD-alpha) or `custom`.
    #[arg(long)]
    pub model: Option<String>,
    /// Dissipation exponent θ (custom models only).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Smoothing exponent θ1 of M (custom models only).
    #[arg(long)]
    pub theta1: Option<f64>,
    /// Smoothing exponent θ2 of N (custom models only).
    #[arg(long)]
    pub theta2: Option<f64>,
    /// Bilinear form B1, B2, B3, B4 or B5(i,j,k) (custom models only).
    #[arg(long)]
    pub form: Option<String>,
    /// Filter length α.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Viscosity ν; also sets η for MHD models unless --eta is given.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Magnetic diffusivity η.
    #[arg(long)]
    pub eta: Option<f64>,
}

/// Discretization and run control shared by the time-dependent subcommands.
#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// Points per axis (power of two, at least 8).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Spatial dimension, 2 or 3.
    #[arg(long)]
    pub dims: Option<usize>,
    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Seed for the random initial data.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Steps between diagnostic samples.
    #[arg(long)]
    pub every: Option<usize>,
    /// TOML config file; inline flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores for sweeps, one for single runs).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Spectral slope of the random initial data.
    #[arg(long, allow_hyphen_values = true)]
    pub init_slope: Option<f64>,
    /// L² norm of the initial data.
    #[arg(long)]
    pub init_amplitude: Option<f64>,
    /// L² norm of a steady band-limited forcing (0 = unforced).
    #[arg(long)]
    pub forcing_amplitude: Option<f64>,
    /// Forcing band in lattice shells, as `lo,hi`.
    #[arg(long, value_delimiter = ',')]
    pub forcing_band: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Sobolev orders whose norms are recorded, e.g. `-1,0,1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub norms: Option<Vec<f64>>,
    /// Write a snapshot every this many samples (0 = initial and final only).
    #[arg(long)]
    pub snapshot_every: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RegimeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Spatial dimension n of the theorems.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Check only this theorem (e.g. uniqueness-b).
    #[arg(long)]
    pub theorem: Option<String>,
    /// Fix the theorem's free exponent instead of solving for its set.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Print the full report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum SweepKind {
    AlphaSweep,
    InviscidLimit,
    AbsorbingBall,
    TwinRun,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Experiment kind (taken from the config file when omitted).
    #[arg(long, value_enum)]
    pub kind: Option<SweepKind>,
    /// Swept values: α, ν, amplitude multipliers or initial gaps.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct DetermineArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Radii |k| of the synchronized mode sets.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Final gap regarded as zero.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Snapshot file; without it the spectrum of generated initial data is shown.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// Model whose block count (one or two fields) the generated data has.
    #[arg(long)]
    pub model: Option<String>,
    /// Points per axis of the generated data.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Spatial dimension of the generated data.
    #[arg(long)]
    pub dims: Option<usize>,
    /// Seed of the generated data.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Spectral slope of the generated data.
    #[arg(long, allow_hyphen_values = true)]
    pub init_slope: Option<f64>,
    /// Also write `spectrum.tsv` into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PresetsArgs {
    /// Also list the MHD presets.
    #[arg(long)]
    pub all: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("regflow: {e}");
            commands::exit_code(&e)
        }
    }
}
