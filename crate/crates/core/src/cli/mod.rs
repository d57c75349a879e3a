//! Command-line front end: `packet`, `evolve`, `scan`, `chain` and `verify`.

pub mod commands;
pub mod config;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::dynamics::record::write_atomic;
use crate::error::Error;

pub use commands::{cmd_chain, cmd_evolve, cmd_packet, cmd_scan, Output};
pub use config::RunConfig;
pub use verify::{cmd_verify, moment_identities, Check, Status};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("config: {0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Parse(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mepacket", version, about = "Maximum-entropy phase-space packets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output CSV path (overrides `output.path`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// RNG seed (overrides `evolve.seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress diagnostics on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Multipliers, entropies and weights of the configured packet.
    Packet,
    /// Trajectory of means and spreads as CSV.
    Evolve,
    /// Quantum versus classical deviation as both spreads grow.
    Scan,
    /// Normal modes, Gibbs state and length statistics of the chain.
    Chain,
    /// Built-in regression checks of published and closed-form values.
    Verify,
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let path = path.ok_or_else(|| CliError::Parse("--config PATH is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    RunConfig::parse(&text)
}

/// Runs one command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if cli.command == Command::Verify {
        let checks = cmd_verify();
        for c in &checks {
            println!("{c}");
        }
        let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
        let flagged = checks.iter().filter(|c| c.status == Status::Discrepancy).count();
        println!("{} checks, {failed} failed, {flagged} published discrepancies", checks.len());
        return Ok(if failed == 0 { 0 } else { 1 });
    }
    let cfg = load_config(cli.config.as_deref())?;
    let out = match cli.command {
        Command::Packet => cmd_packet(&cfg)?,
        Command::Evolve => cmd_evolve(&cfg, cli.seed)?,
        Command::Scan => cmd_scan(&cfg)?,
        Command::Chain => cmd_chain(&cfg)?,
        Command::Verify => unreachable!(),
    };
    if !cli.quiet {
        for d in &out.diagnostics {
            eprintln!("{d}");
        }
    }
    print!("{}", out.report);
    if let Some(csv) = &out.csv {
        let target = cli.out.clone().or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone()).map(PathBuf::from));
        match target {
            Some(path) => write_atomic(&path, csv.as_bytes())
                .map_err(|e| CliError::Validation(format!("writing {}: {e}", path.display())))?,
            None => print!("{csv}"),
        }
    }
    Ok(0)
}
