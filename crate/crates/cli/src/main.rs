//! `geolab`: command-line front end for the geodesic and semitube pipelines.

mod cli;
mod geodesic;
mod inputs;
mod report;
mod semitube;
mod svg;
mod util;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use geolab_core::Execution;

use cli::{Cli, Command};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_REJECTED: u8 = 2;
pub const EXIT_DEGENERATE: u8 = 3;
pub const EXIT_NO_CONVERGENCE: u8 = 4;
pub const EXIT_VIOLATIONS: u8 = 5;

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        anyhow::ensure!(n > 0, "GEOLAB_THREADS / --threads must be positive");
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    let execution = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Geodesic(cmd) => geodesic::run(cmd, execution),
        Command::Semitube(cmd) => semitube::run(cmd, execution),
        Command::Util(cmd) => util::run(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
