//! `btlimit`: construct bandlimited bases, extrapolate noisy segments, sweep
//! noise levels, and demonstrate multiband synthesis, all from one JSON
//! config. Outputs are CSVs (plus an SVG sketch per command) stamped with
//! the tool version and a hash of the resolved configuration.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 solver failure,
//! 4 spectrum or resolution failure, 1 anything else.

mod commands;
mod config;
mod svg;

use btlimit_core::btsignal::SignalError;
use btlimit_core::extrapolate::ExtrapolateError;
use btlimit_core::pswf::PswfError;
use clap::{Args, Parser, Subcommand};
use config::ExperimentConfig;
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Solver(String),

    #[error("{0}")]
    Resolution(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Resolution(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<PswfError> for CliError {
    fn from(e: PswfError) -> Self {
        match e {
            PswfError::ResolutionTooSmall { .. }
            | PswfError::EigenvalueFloor { .. }
            | PswfError::ResolutionUnstable { .. } => CliError::Resolution(e.to_string()),
            PswfError::InvalidParams { .. } | PswfError::ZeroCount => {
                CliError::Usage(e.to_string())
            }
            PswfError::Io(io) => CliError::Io(io),
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<btlimit_core::numerics::NumericsError> for CliError {
    fn from(e: btlimit_core::numerics::NumericsError) -> Self {
        use btlimit_core::numerics::NumericsError as N;
        match e {
            N::EmptyRule | N::InvalidInterval { .. } => CliError::Usage(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<SignalError> for CliError {
    fn from(e: SignalError) -> Self {
        match e {
            SignalError::Pswf(inner) => inner.into(),
            SignalError::InvalidBand { .. }
            | SignalError::EmptyComponents
            | SignalError::InvalidGamma(_)
            | SignalError::InvalidSegment { .. }
            | SignalError::TooFewSamples { .. } => CliError::Usage(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<ExtrapolateError> for CliError {
    fn from(e: ExtrapolateError) -> Self {
        match e {
            ExtrapolateError::Pswf(inner) => inner.into(),
            ExtrapolateError::Signal(inner) => inner.into(),
            ExtrapolateError::TooFewObservations { .. }
            | ExtrapolateError::InvalidEpsilon(_)
            | ExtrapolateError::ParamMismatch { .. }
            | ExtrapolateError::EmptyEpsilons
            | ExtrapolateError::ZeroTrials => CliError::Usage(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "btlimit",
    version,
    about = "Bandlimited signal bases, extrapolation, and noise sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; defaults apply for every omitted field.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Print the resolved config as JSON and exit without running.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct MethodArg {
    /// Extrapolation strategy.
    #[arg(long, default_value = "mns")]
    method: String,
}

#[derive(Subcommand)]
enum Command {
    /// Build the basis and export its eigenvalues and node values.
    Basis {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Extrapolate one noisy segment and compare against the truth.
    Extrapolate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        method: MethodArg,
        /// Override the noise bound (default: first config epsilon).
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Run the full noise sweep and report the error-law statistics.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        method: MethodArg,
    },
    /// Synthesize the configured multiband combination and check its spectrum.
    Multiband {
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Load config, apply flag overrides, validate, and honor --dump-config.
/// Returns None when the run should stop after dumping.
fn resolve(common: &CommonArgs) -> Result<Option<ExperimentConfig>, CliError> {
    let mut cfg = ExperimentConfig::load(common.config.as_deref())?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    if common.dump_config {
        let text = serde_json::to_string_pretty(&cfg)
            .map_err(|e| CliError::Usage(format!("cannot serialize config: {e}")))?;
        println!("{text}");
        return Ok(None);
    }
    std::fs::create_dir_all(&common.out)?;
    Ok(Some(cfg))
}

fn validated_method(name: &str) -> Result<Box<dyn btlimit_core::extrapolate::Extrapolator>, CliError> {
    btlimit_core::extrapolate::by_name(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown method {name:?}; available: {}",
            btlimit_core::extrapolate::method_names().join(", ")
        ))
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Basis { common } => {
            let Some(cfg) = resolve(&common)? else { return Ok(()) };
            commands::basis::run(&cfg, &common.out)
        }
        Command::Extrapolate {
            common,
            method,
            epsilon,
        } => {
            let Some(cfg) = resolve(&common)? else { return Ok(()) };
            if let Some(eps) = epsilon {
                if !eps.is_finite() || eps < 0.0 {
                    return Err(CliError::Usage(format!(
                        "epsilon must be finite and nonnegative, got {eps}"
                    )));
                }
            }
            let solver = validated_method(&method.method)?;
            commands::extrapolate::run(&cfg, epsilon, solver.as_ref(), &common.out)
        }
        Command::Sweep { common, method } => {
            let Some(cfg) = resolve(&common)? else { return Ok(()) };
            let solver = validated_method(&method.method)?;
            commands::sweep::run(&cfg, solver.as_ref(), &common.out)
        }
        Command::Multiband { common } => {
            let Some(cfg) = resolve(&common)? else { return Ok(()) };
            commands::multiband::run(&cfg, &common.out)
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe (`btlimit basis | head`)
    // instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Clap prints help/version to stdout (exit 0) and usage errors
            // to stderr (exit 2) on its own.
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
