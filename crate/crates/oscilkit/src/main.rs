use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use oscilkit::config::{Cli, RunConfig, RunError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let outcome = oscilkit::run(&cfg)?;
        oscilkit::emit(&cfg, &outcome).map_err(RunError::from)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("oscilkit: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("oscilkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
