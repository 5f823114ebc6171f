//! Command-line front end for `gsd_core`: configuration, sweep orchestration
//! and CSV, JSON and SVG emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod format;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use crate::config::Cli;
use crate::error::{EXIT_OK, EXIT_USAGE};

/// Parses `args`, runs the command and returns the process exit code.
/// Diagnostics go to `err`, results to `out`.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = cli.settings.resolve(cli.command).and_then(|cfg| commands::execute(&cfg, out));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "gsd: {e}");
            e.exit_code()
        }
    }
}
