//! Run manifest written beside every output.

use std::fs;
use std::path::Path;

use ira_lattice::sim::git_revision;
use ira_lattice::Result;
use serde::Serialize;
use serde_json::Value;

use crate::args::Cli;

#[derive(Serialize)]
struct Manifest<'a> {
    /// argv that reproduces the run
    argv: Vec<String>,
    version: &'static str,
    git_revision: Option<String>,
    seed: u64,
    threads: usize,
    /// fully resolved arguments
    invocation: &'a Cli,
    /// digests of the tables the run depended on
    digests: Value,
}

pub fn write(cli: &Cli, digests: Value) -> Result<()> {
    write_to(&cli.out, cli, digests)
}

fn write_to(dir: &Path, cli: &Cli, digests: Value) -> Result<()> {
    fs::create_dir_all(dir)?;
    let m = Manifest {
        argv: std::env::args().collect(),
        version: env!("CARGO_PKG_VERSION"),
        git_revision: git_revision(),
        seed: cli.seed,
        threads: cli.threads,
        invocation: cli,
        digests,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&m)?)?;
    Ok(())
}
