//! `farcast` — command-line front end for the protocol laboratory.
//!
//! Exit codes: 0 success, 1 computational failure, 2 invalid arguments.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "farcast",
    version,
    about = "Scheduling, simulation, and reliability analysis for long-range-interaction state transfer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve hypercube shell times or run the greedy protocol clock
    Schedule(ScheduleArgs),
    /// Sweep scaling-exponent fits over a grid of coupling exponents
    Fig3(Fig3Args),
    /// Run a protocol end to end on the state-vector simulator
    Simulate(SimulateArgs),
    /// Dipolar interaction integrals, monotonicity derivative, cube dilation
    Dipolar(DipolarArgs),
    /// Decoherence and gate-fidelity limits on entangleable qubit counts
    Reliability(ReliabilityArgs),
    /// MERA construction-time bounds, lowered schedules, and replay
    Mera(MeraArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Hypercube,
    Greedy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhaseArg {
    #[value(name = "ghz_only")]
    GhzOnly,
    #[value(name = "full_transfer")]
    FullTransfer,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Dipolar,
    Power,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GateArg {
    Identity,
    Entangler,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Spatial dimension (1-3)
    #[arg(long = "d")]
    d: usize,
    /// Coupling exponent
    #[arg(long)]
    alpha: f64,
    /// Number of expansion shells (the transfer distance in lattice units)
    #[arg(long = "L")]
    l: usize,
    #[arg(long, value_enum, default_value = "hypercube")]
    mode: ModeArg,
    /// Emit the (L, one_way_time) scaling sweep instead of per-shell rows
    /// (hypercube mode only)
    #[arg(long)]
    sweep: bool,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Cap problem sizes for CI-speed runs
    #[arg(long)]
    smoke: bool,
}

#[derive(Args)]
struct Fig3Args {
    #[arg(long = "d", default_value_t = 2)]
    d: usize,
    /// Exponent grid: "start:stop:step" or a comma-separated list
    #[arg(long, default_value = "1.0:4.0:0.25")]
    alphas: String,
    #[arg(long = "L-max", default_value_t = 1000)]
    l_max: usize,
    /// Fit window as a fraction of L-max
    #[arg(long, default_value_t = 0.9)]
    window: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Cap L-max at 200 for CI-speed runs
    #[arg(long)]
    smoke: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[arg(long = "d")]
    d: usize,
    /// Sites per lattice edge (total qubits = L^d, at most 24)
    #[arg(long = "L")]
    l: usize,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    /// Source amplitude of |0>, as "re" or "re,im"
    #[arg(long)]
    a: String,
    /// Source amplitude of |1>, as "re" or "re,im"
    #[arg(long)]
    b: String,
    #[arg(long, value_enum, default_value = "greedy")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "ghz_only")]
    phase: PhaseArg,
    /// Include the full amplitude dump in the report
    #[arg(long)]
    dump_state: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap total qubits at 12 for CI-speed runs
    #[arg(long)]
    smoke: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct DipolarArgs {
    /// Evaluate the prism interaction integral against --target
    #[arg(long)]
    integral: bool,
    /// Evaluate the analytic d/dx of the prism interaction at --point
    #[arg(long)]
    dvdx: bool,
    /// Fill in a cube-dilation schedule
    #[arg(long)]
    dilate: bool,
    #[arg(long, default_value_t = 1.0)]
    lx: f64,
    #[arg(long, default_value_t = 1.0)]
    ly: f64,
    #[arg(long, default_value_t = 1.0)]
    lz: f64,
    /// Prism anchor: the prism occupies x in [x0, x0 + lx]
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    /// Target point "x,y,z" for --integral
    #[arg(long)]
    target: Option<String>,
    /// Evaluation point "x,y,z" for --dvdx
    #[arg(long)]
    point: Option<String>,
    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Initial cube edge for --dilate
    #[arg(long, default_value_t = 1.0)]
    edge: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    #[arg(long, default_value_t = 5)]
    steps: usize,
    #[arg(long, value_enum, default_value = "dipolar")]
    kernel: KernelArg,
    /// Exponent for --kernel power
    #[arg(long)]
    alpha: Option<f64>,
    /// Dimension for --kernel power
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Cap dilation at 3 steps for CI-speed runs
    #[arg(long)]
    smoke: bool,
}

#[derive(Args)]
struct ReliabilityArgs {
    /// Use the worked headline parameters (the default when no overrides are given)
    #[arg(long)]
    paper_defaults: bool,
    /// Step time with unit suffix (ns/us/ms/s), e.g. "5ns"
    #[arg(long)]
    dt: Option<String>,
    /// Qubit lifetime 1/gamma with unit suffix, e.g. "340us"
    #[arg(long)]
    lifetime: Option<String>,
    /// Failure rate in 1/s (alternative to --lifetime)
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Single-qubit gates per qubit per step
    #[arg(long = "c")]
    c: Option<f64>,
    /// Single-qubit gate success probability
    #[arg(long = "P")]
    p_gate: Option<f64>,
    /// Evaluate wall time and success probability at this qubit count
    /// (defaults to the long-range limit)
    #[arg(long = "N")]
    n: Option<f64>,
    /// Sweep one parameter: "name=start:stop:count" with name in
    /// {dt, lifetime, eps, lambda, c, P}; durations take unit suffixes
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    smoke: bool,
}

#[derive(Args)]
struct MeraArgs {
    /// Evaluate the construction-time bound
    #[arg(long)]
    bound: bool,
    /// Build the lowered 1D binary schedule
    #[arg(long)]
    schedule: bool,
    /// Replay the lowered schedule on the state-vector simulator
    #[arg(long)]
    replay: bool,
    #[arg(long = "L")]
    l: usize,
    #[arg(long, default_value_t = 2)]
    phi: usize,
    #[arg(long = "d", default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    /// Gate choice for --replay
    #[arg(long, value_enum, default_value = "identity")]
    gate: GateArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to csv for --bound, json otherwise
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Cap L for CI-speed runs
    #[arg(long)]
    smoke: bool,
}

/// Errors mapped onto the exit-code scheme.
enum CliError {
    /// Exit 2.
    Validation(String),
    /// Exit 1.
    Computation(String),
}

impl From<farcast_core::Error> for CliError {
    fn from(err: farcast_core::Error) -> Self {
        if err.is_validation() {
            CliError::Validation(err.to_string())
        } else {
            CliError::Computation(err.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Computation(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => err.exit(),
    };
    let result = match cli.command {
        Command::Schedule(args) => commands::schedule(args),
        Command::Fig3(args) => commands::fig3(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::Dipolar(args) => commands::dipolar(args),
        Command::Reliability(args) => commands::reliability(args),
        Command::Mera(args) => commands::mera(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
