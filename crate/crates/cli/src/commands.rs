//! Subcommand implementations.

use std::io::Write;

use gsd_core::fock::PhasePoint;
use gsd_core::homodyne::homodyne_error;
use gsd_core::operators::{Mixedness, StateFamily};
use gsd_core::spectra::{gram_trace_distance, helstrom_pure};
use gsd_core::sweep::{evaluate_point, run_convergence_audit, run_sweep, SweepGrid, SweepOutput, SweepRecord};

use crate::config::{CommandKind, Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::figures::{figure_levels, homodyne_comparison, panel_names, write_comparison, write_panels, FIG7B_COLUMNS};
use crate::format::{num, opt_num, write_records, write_table};
use crate::output::{ensure_dir, write_error_log, write_file, write_json, SweepDocument};
use crate::svg::heatmap;

/// Agreement required between the matrix and Gram-oracle trace distances in
/// the `point` report.
pub const ORACLE_TOL: f64 = 1e-7;

/// Runs the configured subcommand on a pool of `jobs` workers, or the global
/// pool when unset.
pub fn execute(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    match cfg.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
            pool.install(|| dispatch(cfg, out))
        }
        None => dispatch(cfg, out),
    }
}

fn dispatch(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    match cfg.command {
        CommandKind::Point => cmd_point(cfg, out),
        CommandKind::Sweep => cmd_sweep(cfg, out),
        CommandKind::HomodyneCompare => cmd_homodyne_compare(cfg, out),
        CommandKind::Figures => cmd_figures(cfg, out),
    }
}

pub fn cmd_point(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    let point = PhasePoint::new(cfg.x, cfg.p)?;
    let sq = cfg.squeeze()?;
    let family = StateFamily::for_squeezing(sq);
    let eval = evaluate_point(point, sq, cfg.dim)?;
    let gram_pure = gram_trace_distance(point, family, Mixedness::Pure)?;
    let gram_mixed = gram_trace_distance(point, family, Mixedness::Mixed)?;
    let (dp, dm) = ((eval.pure.trace_distance - gram_pure).abs(), (eval.mixed.trace_distance - gram_mixed).abs());

    let mut lines = vec![
        ("x", num(cfg.x)),
        ("p", num(cfg.p)),
        ("r", num(sq.r())),
        ("squeezing_db", num(sq.decibels())),
        ("dim", cfg.dim.to_string()),
        ("trace_distance_pure", num(eval.pure.trace_distance)),
        ("trace_distance_mixed", num(eval.mixed.trace_distance)),
        ("pe_pure", num(eval.pure.p_error)),
        ("pe_mixed", num(eval.mixed.p_error)),
        ("pe_mixed_minus_pure", num(eval.mixed.p_error - eval.pure.p_error)),
        ("pe_helstrom_closed", num(helstrom_pure(cfg.x.abs(), sq))),
    ];
    if sq.is_coherent() {
        lines.push(("pe_homodyne", num(homodyne_error(cfg.x.abs())?)));
    }
    lines.extend([
        ("i_pure", num(eval.rates.i_pure)),
        ("i_mixed", num(eval.rates.i_mixed)),
        ("i_gain", num(eval.rates.i_gain)),
        ("i_levitin", opt_num(eval.rates.levitin)),
        ("oracle_trace_distance_pure", num(gram_pure)),
        ("oracle_trace_distance_mixed", num(gram_mixed)),
        ("oracle_abs_diff_pure", num(dp)),
        ("oracle_abs_diff_mixed", num(dm)),
        ("oracle_agreement", if dp.max(dm) < ORACLE_TOL { "yes" } else { "no" }.to_string()),
    ]);
    for (key, value) in lines {
        writeln!(out, "{key:<28} {value}")?;
    }
    Ok(())
}

fn write_surface_svgs(cfg: &RunConfig, grid: &SweepGrid, output: &SweepOutput) -> CliResult<()> {
    let (xs, ps) = (grid.xs(), grid.ps());
    type Quantity = (&'static str, fn(&SweepRecord) -> f64);
    let quantities: [Quantity; 3] =
        [("pe_pure", |s| s.pe_pure), ("pe_mixed", |s| s.pe_mixed), ("i_gain", |s| s.i_gain_emitted())];
    for sq in &grid.squeezing_levels {
        let level: Vec<_> = output.records.iter().filter(|rec| rec.r == sq.r()).collect();
        for (name, value) in quantities {
            let values: Vec<f64> = level.iter().map(|rec| value(rec)).collect();
            let title = format!("{name}, r = {}", num(sq.r()));
            let svg = heatmap(&title, &xs, &ps, &values, "x", "p");
            write_file(&cfg.out.join(format!("sweep_{name}_r{}.svg", num(sq.r()))), svg.as_bytes())?;
        }
    }
    Ok(())
}

fn report_failures(output: &SweepOutput) {
    if !output.failures.is_empty() {
        log::warn!("{} grid points failed; see the error log", output.failures.len());
    }
}

pub fn cmd_sweep(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    let grid = cfg.grid(cfg.sweep_levels()?);
    let output = run_sweep(&grid)?;
    report_failures(&output);
    ensure_dir(&cfg.out)?;
    write_error_log(&cfg.out, &output.failures)?;
    if cfg.formats.contains(Format::Csv) {
        let mut buf = Vec::new();
        write_records(&mut buf, &output.records)?;
        write_file(&cfg.out.join("sweep.csv"), &buf)?;
    }
    if cfg.formats.contains(Format::Json) {
        let doc = SweepDocument { grid: &grid, records: &output.records, failures: &output.failures };
        write_json(&cfg.out.join("sweep.json"), &doc)?;
    }
    if cfg.formats.contains(Format::Svg) {
        write_surface_svgs(cfg, &grid, &output)?;
    }
    if let Some(dim_hi) = cfg.audit_dim {
        let audit = run_convergence_audit(&grid, dim_hi)?;
        write_json(&cfg.out.join("audit.json"), &audit)?;
        writeln!(out, "audit: {} points at N={dim_hi}, max |dpe| = {}", audit.sampled, num(audit.max_delta))?;
    }
    let flagged = output.records.iter().filter(|r| r.convergence_flag).count();
    writeln!(
        out,
        "sweep: {} records, {flagged} flagged, {} failed, written to {}",
        output.records.len(),
        output.failures.len(),
        cfg.out.display()
    )?;
    Ok(())
}

pub fn cmd_homodyne_compare(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    let grid = cfg.grid(vec![]);
    let rows = homodyne_comparison(&grid.xs(), cfg.dim)?;
    ensure_dir(&cfg.out)?;
    write_comparison("homodyne_compare", &rows, &cfg.out, cfg.formats)?;
    if cfg.formats.contains(Format::Json) {
        let doc: Vec<_> = rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "x": r.x,
                    "pe_homodyne": r.pe_homodyne,
                    "pe_helstrom": r.pe_helstrom,
                    "pe_mixed_slice_p0.55": r.pe_mixed_slice,
                })
            })
            .collect();
        write_json(&cfg.out.join("homodyne_compare.json"), &doc)?;
    }
    let table = rows.iter().map(|r| [num(r.x), num(r.pe_homodyne), num(r.pe_helstrom), num(r.pe_mixed_slice)]);
    write_table(&mut *out, &FIG7B_COLUMNS, table)?;
    Ok(())
}

pub fn cmd_figures(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    if cfg.r.is_some() {
        log::warn!("--r is ignored by figures; panels use r = 0, 0.35 and 0.70");
    }
    let grid = cfg.grid(figure_levels());
    let output = run_sweep(&grid)?;
    report_failures(&output);
    ensure_dir(&cfg.out)?;
    write_error_log(&cfg.out, &output.failures)?;
    if cfg.formats.contains(Format::Json) {
        let doc = SweepDocument { grid: &grid, records: &output.records, failures: &output.failures };
        write_json(&cfg.out.join("sweep.json"), &doc)?;
    }
    let failed = write_panels(&grid, &output.records, &cfg.out, cfg.formats);
    for (name, err) in &failed {
        log::error!("panel {name} failed: {err}");
    }
    let total = panel_names().len();
    writeln!(out, "figures: {} panels written to {}", total - failed.len(), cfg.out.display())?;
    if !failed.is_empty() {
        let names: Vec<&str> = failed.iter().map(|(n, _)| n.as_str()).collect();
        return Err(CliError::Partial { failed: failed.len(), total, names: names.join(", ") });
    }
    Ok(())
}
