//! Command-line, environment and config-file settings.
//!
//! Every setting resolves in the order flag, `GSD_*` environment variable,
//! `key = value` config file, built-in default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use gsd_core::fock::{SqueezeParameter, DEFAULT_DIM};
use gsd_core::sweep::SweepGrid;

use crate::error::{CliError, CliResult};

pub const DEFAULT_GRID_STEPS: usize = 51;
pub const DEFAULT_OUT: &str = "gsd-out";

#[derive(Debug, Parser)]
#[command(name = "gsd", version, about = "Distinguishability of pure and mixed coherent and squeezed states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,

    #[command(flatten)]
    pub settings: RawSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    /// Evaluate one (x, p, r) configuration and print every quantity.
    Point,
    /// Evaluate the (x, p) grid and write the record table.
    Sweep,
    /// Compare homodyne detection with the optimal measurement along x.
    HomodyneCompare,
    /// Write the data and SVG panels of every figure.
    Figures,
}

/// Settings as given on the command line or in the environment.
#[derive(Debug, Clone, Default, Args)]
pub struct RawSettings {
    /// Half-separation along the amplitude quadrature.
    #[arg(long, global = true, env = "GSD_X", allow_negative_numbers = true)]
    pub x: Option<f64>,

    /// Displacement along the phase quadrature.
    #[arg(long, global = true, env = "GSD_P", allow_negative_numbers = true)]
    pub p: Option<f64>,

    /// Squeezing parameter; for `sweep` it replaces the default levels 0, 0.35, 0.7.
    #[arg(long, global = true, env = "GSD_R", allow_negative_numbers = true)]
    pub r: Option<f64>,

    /// Fock-space truncation N.
    #[arg(long, global = true, env = "GSD_DIM")]
    pub dim: Option<usize>,

    /// Grid points per axis over [0, 2.5].
    #[arg(long, global = true, env = "GSD_GRID_STEPS")]
    pub grid_steps: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, env = "GSD_OUT")]
    pub out: Option<PathBuf>,

    /// Comma-separated subset of csv,json,svg.
    #[arg(long, global = true, env = "GSD_FORMATS")]
    pub formats: Option<FormatSet>,

    /// Worker threads for grid evaluation.
    #[arg(long, global = true, env = "GSD_JOBS")]
    pub jobs: Option<usize>,

    /// Re-evaluate a 10% subsample at this truncation and write audit.json (sweep only).
    #[arg(long, global = true, env = "GSD_AUDIT_DIM")]
    pub audit_dim: Option<usize>,

    /// key = value file supplying settings not given as flags or environment.
    #[arg(long, global = true, env = "GSD_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Nonempty set of output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormatSet {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl FormatSet {
    pub const ALL: FormatSet = FormatSet { csv: true, json: true, svg: true };

    pub fn contains(&self, f: Format) -> bool {
        match f {
            Format::Csv => self.csv,
            Format::Json => self.json,
            Format::Svg => self.svg,
        }
    }
}

impl FromStr for FormatSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = FormatSet { csv: false, json: false, svg: false };
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item.to_ascii_lowercase().as_str() {
                "csv" => set.csv = true,
                "json" => set.json = true,
                "svg" => set.svg = true,
                other => return Err(format!("unknown format '{other}' (expected csv, json or svg)")),
            }
        }
        if !(set.csv || set.json || set.svg) {
            return Err("the format set must not be empty".into());
        }
        Ok(set)
    }
}

impl fmt::Display for FormatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(self.csv, "csv"), (self.json, "json"), (self.svg, "svg")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect();
        f.write_str(&names.join(","))
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub x: f64,
    pub p: f64,
    pub r: Option<f64>,
    pub dim: usize,
    pub grid_steps: usize,
    pub out: PathBuf,
    pub formats: FormatSet,
    pub jobs: Option<usize>,
    pub audit_dim: Option<usize>,
}

impl RunConfig {
    pub fn squeeze(&self) -> CliResult<SqueezeParameter> {
        SqueezeParameter::new(self.r.unwrap_or(0.0)).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Grid on `[0, 2.5]²` with the configured resolution and truncation.
    pub fn grid(&self, squeezing_levels: Vec<SqueezeParameter>) -> SweepGrid {
        SweepGrid { nx: self.grid_steps, np: self.grid_steps, dim: self.dim, squeezing_levels, ..SweepGrid::default() }
    }

    /// The configured level for `sweep`, or the three default levels.
    pub fn sweep_levels(&self) -> CliResult<Vec<SqueezeParameter>> {
        match self.r {
            Some(_) => Ok(vec![self.squeeze()?]),
            None => Ok(SweepGrid::default().squeezing_levels),
        }
    }
}

const FILE_KEYS: [&str; 9] = ["x", "p", "r", "dim", "grid-steps", "out", "formats", "jobs", "audit-dim"];

/// `key = value` pairs; `#` starts a comment, `_` and `-` are interchangeable
/// in keys and values may be quoted.
pub fn parse_config_file(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value", lineno + 1)));
        };
        let key = key.trim().replace('_', "-");
        if !FILE_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", lineno + 1)));
        }
        let value = value.trim().trim_matches('"').to_string();
        map.insert(key, value);
    }
    Ok(map)
}

fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text)
}

fn from_file<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>>
where
    T::Err: fmt::Display,
{
    file.get(key)
        .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("config key {key} = {v}: {e}"))))
        .transpose()
}

fn positive(name: &str, v: usize) -> CliResult<usize> {
    if v == 0 {
        return Err(CliError::Usage(format!("--{name} must be at least 1")));
    }
    Ok(v)
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if !v.is_finite() {
        return Err(CliError::Usage(format!("--{name} must be finite, got {v}")));
    }
    Ok(v)
}

impl RawSettings {
    pub fn resolve(&self, command: CommandKind) -> CliResult<RunConfig> {
        let file = match &self.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let x = self.x.map_or_else(|| from_file(&file, "x"), |v| Ok(Some(v)))?.unwrap_or(0.0);
        let p = self.p.map_or_else(|| from_file(&file, "p"), |v| Ok(Some(v)))?.unwrap_or(0.0);
        let r = self.r.map_or_else(|| from_file(&file, "r"), |v| Ok(Some(v)))?;
        let dim = self.dim.map_or_else(|| from_file(&file, "dim"), |v| Ok(Some(v)))?.unwrap_or(DEFAULT_DIM);
        let grid_steps = self
            .grid_steps
            .map_or_else(|| from_file(&file, "grid-steps"), |v| Ok(Some(v)))?
            .unwrap_or(DEFAULT_GRID_STEPS);
        let out = self
            .out
            .clone()
            .map_or_else(|| from_file(&file, "out"), |v| Ok(Some(v)))?
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        let formats =
            self.formats.map_or_else(|| from_file(&file, "formats"), |v| Ok(Some(v)))?.unwrap_or(FormatSet::ALL);
        let jobs = self.jobs.map_or_else(|| from_file(&file, "jobs"), |v| Ok(Some(v)))?;
        let audit_dim = self.audit_dim.map_or_else(|| from_file(&file, "audit-dim"), |v| Ok(Some(v)))?;

        let config = RunConfig {
            command,
            x: finite("x", x)?,
            p: finite("p", p)?,
            r: r.map(|v| finite("r", v)).transpose()?,
            dim: positive("dim", dim)?,
            grid_steps: positive("grid-steps", grid_steps)?,
            out,
            formats,
            jobs: jobs.map(|j| positive("jobs", j)).transpose()?,
            audit_dim,
        };
        config.squeeze()?;
        config.grid(vec![SqueezeParameter::NONE]).validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(hi) = config.audit_dim {
            if hi <= config.dim {
                return Err(CliError::Usage(format!("--audit-dim {hi} must exceed --dim {}", config.dim)));
            }
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("gsd").chain(args.iter().copied()))
    }

    #[test]
    fn format_sets() {
        assert_eq!("csv,svg".parse::<FormatSet>().unwrap(), FormatSet { csv: true, json: false, svg: true });
        assert_eq!(" JSON ".parse::<FormatSet>().unwrap().to_string(), "json");
        assert!("".parse::<FormatSet>().is_err());
        assert!(",,".parse::<FormatSet>().is_err());
        assert!("csv,png".parse::<FormatSet>().is_err());
    }

    #[test]
    fn empty_formats_rejected_at_parse_time() {
        assert!(parse(&["sweep", "--formats", ""]).is_err());
        assert!(parse(&["sweep", "--formats", "csv"]).is_ok());
    }

    #[test]
    fn flags_are_global() {
        let cli = parse(&["point", "--x", "0.5", "--p", "-0.2", "--r", "0.35", "--dim", "60"]).unwrap();
        assert_eq!(cli.command, CommandKind::Point);
        let cfg = cli.settings.resolve(cli.command).unwrap();
        assert_eq!((cfg.x, cfg.p, cfg.r, cfg.dim), (0.5, -0.2, Some(0.35), 60));
        assert_eq!(cfg.formats, FormatSet::ALL);
        assert_eq!(cfg.grid_steps, DEFAULT_GRID_STEPS);
    }

    #[test]
    fn file_fills_gaps_but_flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# settings\nx = 1.5\ngrid_steps = 11\nformats = \"csv\"\ndim=40\n").unwrap();
        let cli = parse(&["sweep", "--config", path.to_str().unwrap(), "--dim", "55"]).unwrap();
        let cfg = cli.settings.resolve(cli.command).unwrap();
        assert_eq!((cfg.x, cfg.grid_steps, cfg.dim), (1.5, 11, 55));
        assert_eq!(cfg.formats.to_string(), "csv");
    }

    #[test]
    fn config_file_errors() {
        assert!(parse_config_file("colour = red").is_err());
        assert!(parse_config_file("just words").is_err());
        assert!(parse_config_file("x = 1 # trailing\n\n").unwrap().contains_key("x"));
    }

    #[test]
    fn invalid_values_are_usage_errors() {
        for args in [
            &["sweep", "--grid-steps", "0"][..],
            &["point", "--r", "-0.1"],
            &["point", "--dim", "500"],
            &["sweep", "--audit-dim", "40"],
            &["sweep", "--jobs", "0"],
        ] {
            let cli = parse(args).unwrap();
            let err = cli.settings.resolve(cli.command).unwrap_err();
            assert_eq!(err.exit_code(), crate::error::EXIT_USAGE, "{args:?}");
        }
    }
}
