mod cli;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use relgrowth_core::Error;

use crate::cli::Cli;
use crate::commands::UsageError;

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Input(_) | Error::UnknownSymbol(_) | Error::UnsupportedOracle(_) | Error::Range { .. }) => 2,
        Some(Error::BudgetExceeded { .. }) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
