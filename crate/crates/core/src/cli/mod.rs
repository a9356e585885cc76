//! Command-line experiment runner.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification
//! failure.

mod commands;
pub mod experiment;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::solvers::SolverKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hspg", version, about = "Group-sparse optimization experiments: HSPG, Prox-SG, RDA, Prox-SVRG")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recover the zero groups of a synthetic least-squares instance.
    SynthRecovery(SynthArgs),
    /// Logistic regression on a LIBSVM-format dataset.
    Logreg(LogregArgs),
    /// Run many synthetic settings concurrently.
    Sweep(SweepArgs),
    /// Run the randomized property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SwitchMode {
    /// Switch after `--switch-epochs` epochs.
    Fixed,
    /// Switch when the epoch objective is stationary.
    Stationarity,
    /// Never switch.
    Never,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Solvers to run, comma separated (hspg, prox_sg, rda, prox_svrg).
    #[arg(long = "solver", value_delimiter = ',')]
    pub solvers: Vec<SolverKind>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for manifest, traces and summary.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Mini-batch size.
    #[arg(long)]
    pub batch: Option<usize>,
    /// Constant step size.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long = "switch-epochs")]
    pub switch_epochs: Option<usize>,
    #[arg(long, value_enum, default_value_t = SwitchMode::Fixed)]
    pub switch: SwitchMode,
    /// Stationarity window in epochs.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    /// Stationarity relative tolerance.
    #[arg(long, default_value_t = 1e-3)]
    pub rtol: f64,
    /// Fixed HSPG epsilon values, comma separated; one run per value.
    #[arg(long, value_delimiter = ',', value_parser = parse_epsilon)]
    pub epsilon: Vec<f64>,
    /// Also run HSPG with epsilon tuned at the switch.
    #[arg(long = "tune-epsilon")]
    pub tune_epsilon: bool,
    /// Largest epsilon the tuner may pick.
    #[arg(long = "eps-cap", value_parser = parse_epsilon)]
    pub eps_cap: Option<f64>,
    /// Allowed relative objective increase when tuning epsilon.
    #[arg(long, default_value_t = 0.01)]
    pub rho: f64,
    /// RDA gamma; tuned over 1e-3..1e3 when omitted.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Prox-SVRG inner loop length in steps.
    #[arg(long = "inner-loop")]
    pub inner_loop: Option<usize>,
    /// Stage-two step `alpha/t` and batch `t*|B|` in the t-th stage-two epoch.
    #[arg(long = "theoretical-stage2")]
    pub theoretical_stage2: bool,
    /// Fill the wall_seconds column of the CSV traces.
    #[arg(long = "record-wall-time")]
    pub record_wall_time: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Number of instances.
    #[arg(long = "N")]
    pub num_instances: usize,
    /// Number of variables.
    #[arg(long = "n")]
    pub dim: usize,
    #[arg(long, default_value_t = 10)]
    pub groups: usize,
    /// Fraction of zero groups in the ground truth, in [0, 1].
    #[arg(long, value_parser = parse_ratio)]
    pub ratio: f64,
    /// Write the generated instance to this file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LogregArgs {
    /// LIBSVM-format dataset.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub groups: usize,
    /// Lower bound on the feature dimension.
    #[arg(long = "min-dim")]
    pub min_dim: Option<usize>,
    /// Fit without an intercept.
    #[arg(long = "no-bias")]
    pub no_bias: bool,
    /// Step used when the Lipschitz estimate is zero.
    #[arg(long = "alpha-fallback", default_value_t = 0.1)]
    pub alpha_fallback: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Settings as NxnxRATIO, comma separated; defaults to the full recovery table.
    #[arg(long, value_delimiter = ',', value_parser = parse_setting)]
    pub settings: Vec<(usize, usize, f64)>,
    #[arg(long, default_value_t = 10)]
    pub groups: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Suites to run, comma separated; all when omitted.
    #[arg(long = "suite", value_delimiter = ',')]
    pub suites: Vec<String>,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// LIBSVM dataset for the sufficient-decrease suite.
    #[arg(long)]
    pub data: Option<PathBuf>,
}

fn parse_ratio(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("ratio must lie in [0, 1], got {v}"))
    }
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("epsilon must lie in [0, 1), got {v}"))
    }
}

fn parse_setting(s: &str) -> Result<(usize, usize, f64), String> {
    let parts: Vec<&str> = s.split('x').collect();
    if parts.len() != 3 {
        return Err(format!("expected NxnxRATIO, got '{s}'"));
    }
    let big_n = parts[0].parse().map_err(|e| format!("{e}"))?;
    let n = parts[1].parse().map_err(|e| format!("{e}"))?;
    Ok((big_n, n, parse_ratio(parts[2])?))
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_)
        | Error::File { .. }
        | Error::Csv(_)
        | Error::Json(_)
        | Error::Parse { .. }
        | Error::NoInstances
        | Error::InvalidLabel(_) => EXIT_DATA,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Output goes to stdout, diagnostics to stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::SynthRecovery(a) => commands::synth_recovery(&a),
        Command::Logreg(a) => commands::logreg(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
