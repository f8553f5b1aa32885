//! `pauli-est`: command-line front end for `pauli-estimation`.
//!
//! Exit status is 0 on success, 2 on invalid input and 3 on I/O failure.

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    let (report, target) = match &cli.command {
        Command::ExactError(a) => (commands::exact_error(a)?, &a.output),
        Command::Delta(a) => (commands::delta(a)?, &a.output),
        Command::Sweep(a) => (commands::sweep(a)?, &a.output),
        Command::Simulate(a) => (commands::simulate(a)?, &a.output),
        Command::Maxima(a) => (commands::maxima(a)?, &a.output),
    };
    output::emit(&report, target)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("pauli-est {}: error: {err}", cli.command.name());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
