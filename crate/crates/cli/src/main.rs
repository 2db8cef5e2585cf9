//! Batch front end: segment scans, evaluate against ground truth, generate
//! synthetic suites, sweep parameters, and benchmark.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Environment variable holding the default config file path.
pub const CONFIG_ENV: &str = "TERRASEG_CONFIG";

#[derive(Parser)]
#[command(
    name = "terraseg",
    version,
    about = "Traversable-ground and object segmentation for LiDAR scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment scans into terrain and object clusters, writing label files.
    Segment(commands::segment::SegmentArgs),
    /// Score predicted label files against ground-truth label files.
    Eval(commands::eval::EvalArgs),
    /// Render synthetic labeled scans from the built-in scenario suite.
    Synth(commands::synth::SynthArgs),
    /// Re-run segmentation across a parameter range and tabulate metrics.
    Sweep(commands::sweep::SweepArgs),
    /// Time the pipeline stages on one scene.
    Bench(commands::bench::BenchArgs),
}

/// Error classes mapped to distinct exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, malformed, or mismatched inputs (exit 2).
    Input(String),
    /// Invalid configuration (exit 3).
    Config(String),
    /// Anything that should not happen with valid inputs (exit 4).
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<terraseg::ConfigError> for CliError {
    fn from(e: terraseg::ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<terraseg::io::IoError> for CliError {
    fn from(e: terraseg::io::IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Loads the pipeline config from `--config`, the environment default, or
/// the built-in defaults, then applies `--set key=value` overrides.
pub fn resolve_config(
    config_path: Option<&PathBuf>,
    overrides: &[String],
) -> Result<terraseg::PipelineConfig, CliError> {
    let mut cfg = match config_path {
        Some(path) => terraseg::PipelineConfig::from_file(path)?,
        None => match std::env::var_os(CONFIG_ENV) {
            Some(path) => terraseg::PipelineConfig::from_file(std::path::Path::new(&path))?,
            None => terraseg::PipelineConfig::default(),
        },
    };
    for entry in overrides {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{entry}`")))?;
        cfg.set_field(key.trim(), value.trim())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Segment(args) => commands::segment::run(args),
        Command::Eval(args) => commands::eval::run(args),
        Command::Synth(args) => commands::synth::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
        Command::Bench(args) => commands::bench::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
