//! `ira-lattice` command-line entry point.

mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;
use ira_lattice::Error;
use serde_json::json;

use args::Cli;

/// Exit statuses by failure class.
pub mod status {
    pub const USAGE: u8 = 2;
    pub const INPUT: u8 = 3;
    pub const INFEASIBLE: u8 = 4;
    pub const FAILED: u8 = 5;
}

fn classify(err: &Error) -> (u8, &'static str) {
    match err {
        Error::Io(_) | Error::Json(_) | Error::Corrupt(_) => (status::INPUT, "unreadable_input"),
        Error::Infeasible { .. } => (status::INFEASIBLE, "infeasible"),
        Error::InvalidInput(_) | Error::Unrealizable(_) => (status::USAGE, "invalid_input"),
        _ => (status::FAILED, "failed"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = json!({ "error": "usage", "status": status::USAGE, "message": e.to_string().trim() });
            eprintln!("{body}");
            return ExitCode::from(status::USAGE);
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, kind) = classify(&e);
            let body = json!({ "error": kind, "status": code, "message": e.to_string() });
            eprintln!("{body}");
            ExitCode::from(code)
        }
    }
}
