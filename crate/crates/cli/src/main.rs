//! `semiclass <levels|count|wavefunction|observable|scaling> --config <path>`
//!
//! Exit codes: 0 success, 2 configuration error, 3 well certification
//! failure, 4 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use semiclass::io::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] semiclass::Error),
    #[error("cannot write output: {0}")]
    Output(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Core(e) if e.is_certification() => 3,
            CliError::Core(semiclass::Error::InvalidParameter(_) | semiclass::Error::EmptyWindow { .. }) => 2,
            CliError::Core(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Levels,
    Count,
    Wavefunction,
    Observable,
    Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Semiclassical spectra checked against a finite-difference oracle.
#[derive(Debug, Parser)]
#[command(name = "semiclass", version)]
struct Args {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Skip the oracle; oracle columns are left empty.
    #[arg(long)]
    no_oracle: bool,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SEMICLASS_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("SEMICLASS_THREADS = {value:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(args: Args) -> Result<(), CliError> {
    init_threads()?;
    let mut run = config::load(&args.config)?;
    if args.no_oracle {
        run.config.oracle.enabled = false;
    }
    if args.command == Command::Scaling && !run.config.oracle.enabled {
        return Err(CliError::Config("scaling needs the oracle".into()));
    }
    let format = match args.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => run.config.output.format,
    };
    let report = match args.command {
        Command::Levels => commands::levels(&run),
        Command::Count => commands::count(&run),
        Command::Wavefunction => commands::wavefunction(&run),
        Command::Observable => commands::observable(&run),
        Command::Scaling => commands::scaling(&run),
    }?;
    let text = report.table.render(format)?;
    match args.out.or(run.config.output.path.clone()) {
        Some(path) => std::fs::write(&path, text).map_err(CliError::Output)?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(CliError::Output)?,
    }
    for note in &report.notes {
        eprintln!("{note}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semiclass: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
