use std::process::ExitCode;

use clap::Parser;
use modukin_cli::{execute, Cli, ERROR_EXIT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT as u8)
        }
    }
}
