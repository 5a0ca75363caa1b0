//! `tfda`: topological analysis of periodic stream-function snapshots.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 invalid input
//! (bad arguments, malformed files, COT syntax), 3 degenerate field.

mod analyze;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tfda_core::cotlang::{Mode, Style};
use tfda_core::fieldio::CoarseMethod;
use tfda_core::pipeline::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tfda_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
    /// At least one snapshot was not structurally stable.
    #[error("{0} degenerate snapshot(s)")]
    Degenerate(usize),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    fn exit_code(&self) -> u8 {
        use tfda_core::Error as E;
        match self {
            CliError::Core(E::Io { .. }) | CliError::Io { .. } => 1,
            CliError::Core(E::Format { .. } | E::Argument(_) | E::Parse(_) | E::InsufficientData { .. }) => 2,
            CliError::Core(E::Degenerate(_)) | CliError::Degenerate(_) => 3,
            CliError::Core(_) => 1,
            CliError::Csv(e) if e.is_io_error() => 1,
            CliError::Csv(_) | CliError::Usage(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "tfda", version, about = "Topological flow data analysis of periodic 2D flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze stream-function snapshots (paths or glob patterns).
    Analyze(analyze::AnalyzeArgs),
    /// Write a random-phase synthetic stream function.
    Synth(commands::SynthArgs),
    /// Fit distributions and build histograms from vortex tables.
    Stats(commands::StatsArgs),
    /// Validate a COT string and print its canonical form.
    Parse(commands::ParseArgs),
    /// Shell-averaged kinetic energy spectrum of a stream function.
    Spectrum(commands::SpectrumArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CoarseArg {
    Mean,
    Subsample,
}

#[derive(Args, Debug, Clone)]
pub struct SyntaxArgs {
    /// Require the first chain symbol to be α₋·₊ (default).
    #[arg(long, conflicts_with = "permissive")]
    strict: bool,
    /// Accept the relaxed grammar (λ, dotted pairs, any first symbol).
    #[arg(long)]
    permissive: bool,
    /// Write ASCII instead of Unicode COT strings.
    #[arg(long)]
    ascii: bool,
}

impl SyntaxArgs {
    pub fn mode(&self) -> Mode {
        if self.permissive {
            Mode::Permissive
        } else {
            Mode::Strict
        }
    }

    pub fn style(&self) -> Style {
        if self.ascii {
            Style::Ascii
        } else {
            Style::Unicode
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Filtering threshold on the normalized field.
    #[arg(long, default_value_t = 0.1)]
    eps0: f64,
    /// Coarse-graining factor applied before analysis.
    #[arg(long, default_value_t = 1)]
    coarse: usize,
    #[arg(long, value_enum, default_value = "mean")]
    coarse_method: CoarseArg,
    /// Skip division by the field's range.
    #[arg(long)]
    no_normalize: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ConfigArgs {
    pub fn run_config(&self, mode: Mode) -> RunConfig {
        RunConfig {
            eps0: self.eps0,
            coarse_factor: self.coarse,
            coarse_method: match self.coarse_method {
                CoarseArg::Mean => CoarseMethod::Mean,
                CoarseArg::Subsample => CoarseMethod::Subsample,
            },
            normalize: !self.no_normalize,
            mode,
            seed: self.seed,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(a) => analyze::run(&a),
        Command::Synth(a) => commands::synth(&a),
        Command::Stats(a) => commands::stats(&a),
        Command::Parse(a) => commands::parse(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tfda: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
