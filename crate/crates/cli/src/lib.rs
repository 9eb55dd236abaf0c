//! `bopshox` command-line front end: computes a dataset per invocation and
//! writes it as CSV or JSON.

pub mod args;
pub mod commands;
pub mod output;
pub mod schema;

use std::ffi::OsString;
use std::fs;

use bopshox::par::{self, Exec};
use bopshox::{RawParams, SystemParams};
use clap::Parser;
use thiserror::Error;

use args::{Cli, CommonArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{}: {0}", .0.code())]
    Lib(#[from] bopshox::Error),
    #[error("output: {0}")]
    Output(String),
    #[error("dataset: {0}")]
    Schema(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Lib(e) if e.is_validation() => 2,
            CliError::Lib(_) => 3,
            CliError::Output(_) => 2,
            CliError::Schema(_) => 3,
        }
    }
}

fn load_params(common: &CommonArgs) -> Result<SystemParams, CliError> {
    let mut raw = RawParams::default();
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        raw.apply_config(&text).map_err(|e| CliError::Lib(e.into()))?;
    }
    if let Some(v) = common.m {
        raw.m = v;
    }
    if let Some(v) = common.big_m {
        raw.big_m = v;
    }
    if let Some(v) = common.omega {
        raw.omega = v;
    }
    if let Some(v) = common.big_omega {
        raw.big_omega = v;
    }
    if let Some(v) = common.omega_bar {
        raw.big_omega = v * raw.omega;
    }
    if let Some(v) = common.delta {
        raw.delta = v;
    }
    raw.validate().map_err(|e| CliError::Lib(e.into()))
}

fn configure_threads() -> Result<(), CliError> {
    match std::env::var("BOPSHOX_THREADS") {
        Ok(v) => {
            let threads: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&t| t > 0)
                .ok_or_else(|| CliError::Config(format!("BOPSHOX_THREADS must be a positive integer, got '{v}'")))?;
            par::init_thread_pool(threads);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

/// Runs one parsed invocation: computes, validates and writes its datasets.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let params = load_params(&cli.common)?;
    let exec = if cli.common.sequential { Exec::Sequential } else { Exec::default() };
    let datasets = commands::run(&cli.command, &cli.common, &params, exec)?;

    fs::create_dir_all(&cli.common.out)
        .map_err(|e| CliError::Output(format!("{}: {e}", cli.common.out.display())))?;
    for ds in &datasets {
        let schema = schema::validate(ds).map_err(CliError::Schema)?;
        let path = output::write_dataset(ds, &cli.common.out, cli.common.format)
            .map_err(|e| CliError::Output(format!("{}: {e}", cli.common.out.display())))?;
        let (lo, hi) = ds.column_range(schema.key).unwrap_or((f64::NAN, f64::NAN));
        println!(
            "{}: {} rows, {} in [{}, {}] -> {}",
            ds.name,
            ds.rows.len(),
            schema.key,
            output::format_real(lo),
            output::format_real(hi),
            path.display()
        );
    }
    Ok(())
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code: 0 on success, 2 on validation errors, 3 on numerical
/// failures.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
