//! The `umetric` command-line tool: corpus ingestion, α reports, word
//! scans, triangle-shape data and synthetic inputs.
//!
//! Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.

pub mod args;
mod checkpoint;
mod commands;
pub mod error;
pub mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
pub use crate::error::{CliError, CliResult};

/// Parse `argv`, run the command and return the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(&cli.log_level))
        .format_timestamp(None)
        .try_init();
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("umetric: {e}");
            e.exit_code()
        }
    }
}
