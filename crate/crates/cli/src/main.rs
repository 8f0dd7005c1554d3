use std::process::ExitCode;

use clap::Parser;
use qbclab_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => match &outcome.report.error {
            None => ExitCode::SUCCESS,
            Some(message) => {
                eprintln!("qbclab: {message}");
                eprintln!("qbclab: partial report written to {}", outcome.out.join("report.json").display());
                ExitCode::FAILURE
            }
        },
        Err(e) => {
            eprintln!("qbclab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
