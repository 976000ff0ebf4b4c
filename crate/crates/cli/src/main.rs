//! `dfg-shaper`: command-line front end for the pulse-shaper model.
//!
//! Exit codes: 0 on success, 1 for invalid input or configuration, 2 when
//! the model itself fails (the failing stage is named on standard error).

mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use dfg_shaper::PipelineError;

use args::{Cli, Command};

#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Pipeline(PipelineError),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    let result = match &cli.command {
        Command::Shape(a) => commands::shape(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::PmSweep(a) => commands::pm_sweep(a),
        Command::Info(a) => commands::info(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Pipeline(e)) => {
            match e.stage() {
                Some(stage) => eprintln!("error: pipeline failed at stage {stage}: {e}"),
                None => eprintln!("error: {e}"),
            }
            ExitCode::from(2)
        }
    }
}
