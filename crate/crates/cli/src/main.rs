//! `qtda`: Betti numbers of point clouds, classically and by simulated
//! quantum circuits.

mod commands;
mod input;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::{run, CliError, Command};

/// Exit status when a quantum estimate sits on a rounding tie.
const EXIT_UNRELIABLE: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "qtda", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli.command).and_then(|o| {
        let text = o.document.render();
        if let Some(path) = &cli.output {
            std::fs::write(path, &text).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
        }
        print!("{text}");
        Ok(o.reliable)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: estimate is unreliable");
            ExitCode::from(EXIT_UNRELIABLE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
