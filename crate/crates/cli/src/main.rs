mod commands;
mod error;
mod params;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::settings::Options;

/// Photon-added coherent and squeezed states from beam-splitter post-selection.
#[derive(Debug, Parser)]
#[command(name = "photon-adder", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Success probability of the zero-click outcome (optionally swept over |β| or κ).
    Probability,
    /// Quadrature distributions p(x, φ) of the conditional states.
    Quadrature,
    /// Photon-number distributions of the conditional states.
    PhotonDist,
    /// Wigner functions of the conditional states.
    Wigner,
    /// Husimi functions of the conditional states.
    Husimi,
    /// Parity components of the photon-added squeezed vacuum.
    Cat,
    /// Conditional output for a binomial (sub-Poissonian) ancilla.
    Mixed,
    /// Fock amplitudes of the conditional states.
    State,
    /// Run the built-in consistency checks.
    Verify,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = cli
        .options
        .resolve()
        .and_then(|settings| commands::run(cli.command, &settings));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
