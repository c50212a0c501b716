use std::process::ExitCode;

use clap::Parser;
use sre_purity_cli::{execute, exit, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(rendered) => {
            if let Some(summary) = &rendered.summary {
                eprintln!("{summary}");
            }
            if rendered.verified {
                ExitCode::from(exit::OK)
            } else {
                eprintln!(
                    "error: {}",
                    CliError::Verification("one or more checks failed".into())
                );
                ExitCode::from(exit::VERIFICATION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
