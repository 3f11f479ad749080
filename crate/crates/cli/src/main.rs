//! `pochzeta`: figure data and generic sweeps as CSV or JSON.
//!
//! Exit status 0 on success, 1 when a computation fails, 2 on bad usage.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, UsageError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("pochzeta: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("pochzeta: {e:#}");
            ExitCode::from(1)
        }
    }
}
