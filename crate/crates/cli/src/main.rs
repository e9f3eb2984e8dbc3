//! `nlpme`: profiles, verification suites, evolutions and decay fits.

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod config;
mod decay;
mod evolve;
mod output;
mod profile;
mod verify;

/// Bad input from the command line or a config file; exits with status 2.
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UsageError({:?})", self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(name = "nlpme", version, about = "Nonlocal porous medium equation laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the self-similar profile (or the solution at time t) on a grid.
    Profile(profile::ProfileArgs),
    /// Run a closed-form verification suite.
    Verify(verify::VerifyArgs),
    /// Integrate the Cauchy problem from a JSON config.
    Evolve(evolve::EvolveArgs),
    /// Fit Lᵖ decay rates of an evolution.
    Decay(decay::DecayArgs),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<UsageError>() || err.is::<serde_json::Error>() {
        return 2;
    }
    match err.downcast_ref::<nlpme::Error>() {
        Some(nlpme::Error::InvalidParams(_) | nlpme::Error::Domain(_) | nlpme::Error::Cfl { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Profile(a) => profile::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Evolve(a) => evolve::run(a),
        Command::Decay(a) => decay::run(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
