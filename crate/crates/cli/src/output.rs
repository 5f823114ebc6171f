//! File emission shared by the subcommands.

use std::fs;
use std::path::Path;

use gsd_core::sweep::{PointFailure, SweepGrid, SweepRecord};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::format::num;

pub const ERROR_LOG: &str = "sweep_errors.log";

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Document written as `sweep.json`; validated by `schema/sweep.schema.json`.
#[derive(Debug, Serialize)]
pub struct SweepDocument<'a> {
    pub grid: &'a SweepGrid,
    pub records: &'a [SweepRecord],
    pub failures: &'a [PointFailure],
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

/// One line per failed point; an empty file when nothing failed.
pub fn write_error_log(dir: &Path, failures: &[PointFailure]) -> CliResult<()> {
    let text: String =
        failures.iter().map(|f| format!("x={} p={} r={}: {}\n", num(f.x), num(f.p), num(f.r), f.message)).collect();
    write_file(&dir.join(ERROR_LOG), text.as_bytes())
}
