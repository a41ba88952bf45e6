//! `gsp`: batch pipelines over the graph signal processing core.
//!
//! Exit codes: 0 on success, 2 for input and parse errors, 3 for numeric or
//! model errors.

mod commands;

use std::process::ExitCode;

use clap::Parser;

use commands::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_numeric() { 3 } else { 2 })
        }
    }
}
