//! Command-line front end for `capillary-core`: JSON configs and presets,
//! symbol scans, verification, linear evolution and simulation runs with
//! CSV output and a JSON manifest.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 usage or
//! configuration error, 3 numerical divergence (partial output is kept).

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

pub use error::{CliError, CliResult};

use clap::Parser;

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
