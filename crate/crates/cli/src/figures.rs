//! Figure panels derived from a sweep.
//!
//! | panel | content |
//! |-------|---------|
//! | `fig3a`, `fig3b` | `pe_pure`, `pe_mixed` at r = 0 |
//! | `fig4a`, `fig4b` | `i_pure`, `i_mixed` at r = 0 |
//! | `fig5` | `i_gain` at r = 0 |
//! | `fig6a`–`fig6d` | pure `pe`, `i` at r = 0.35 then r = 0.70 |
//! | `fig6e`–`fig6h` | mixed `pe`, `i` at r = 0.35 then r = 0.70 |
//! | `fig7a` | `pe_homodyne` at r = 0 |
//! | `fig7b` | homodyne, optimal and p = 0.55 mixed error along x |
//! | `fig8a`, `fig8b` | `i_gain` at r = 0.35, 0.70 |
//! | `fig8c` | max over p of `i_gain` along x for each r |

use std::path::Path;

use gsd_core::fock::{PhasePoint, SqueezeParameter};
use gsd_core::homodyne::homodyne_error;
use gsd_core::information::emitted_gain;
use gsd_core::operators::{Mixedness, StateFamily};
use gsd_core::spectra::{discriminate, helstrom_pure_coherent};
use gsd_core::sweep::{SweepGrid, SweepRecord};
use rayon::prelude::*;

use crate::config::{Format, FormatSet};
use crate::error::{CliError, CliResult};
use crate::format::{num, write_table};
use crate::output::write_file;
use crate::svg::{heatmap, line_chart, Series};

/// Phase displacement of the mixed-state slice in `fig7b`.
pub const MIXED_SLICE_P: f64 = 0.55;

pub const FIG7B_COLUMNS: [&str; 4] = ["x", "pe_homodyne", "pe_helstrom", "pe_mixed_slice_p0.55"];

type Quantity = fn(&SweepRecord) -> f64;

struct SurfaceSpec {
    name: &'static str,
    title: &'static str,
    column: &'static str,
    r: f64,
    value: Quantity,
}

const SURFACES: [SurfaceSpec; 16] = [
    SurfaceSpec {
        name: "fig3a",
        title: "Error probability, pure coherent",
        column: "pe_pure",
        r: 0.0,
        value: |s| s.pe_pure,
    },
    SurfaceSpec {
        name: "fig3b",
        title: "Error probability, mixed coherent",
        column: "pe_mixed",
        r: 0.0,
        value: |s| s.pe_mixed,
    },
    SurfaceSpec {
        name: "fig4a",
        title: "Information rate, pure coherent",
        column: "i_pure",
        r: 0.0,
        value: |s| s.i_pure,
    },
    SurfaceSpec {
        name: "fig4b",
        title: "Information rate, mixed coherent",
        column: "i_mixed",
        r: 0.0,
        value: |s| s.i_mixed,
    },
    SurfaceSpec {
        name: "fig5",
        title: "Information gain, coherent",
        column: "i_gain",
        r: 0.0,
        value: |s| s.i_gain_emitted(),
    },
    SurfaceSpec {
        name: "fig6a",
        title: "Error probability, pure squeezed r=0.35",
        column: "pe_pure",
        r: 0.35,
        value: |s| s.pe_pure,
    },
    SurfaceSpec {
        name: "fig6b",
        title: "Information rate, pure squeezed r=0.35",
        column: "i_pure",
        r: 0.35,
        value: |s| s.i_pure,
    },
    SurfaceSpec {
        name: "fig6c",
        title: "Error probability, pure squeezed r=0.70",
        column: "pe_pure",
        r: 0.70,
        value: |s| s.pe_pure,
    },
    SurfaceSpec {
        name: "fig6d",
        title: "Information rate, pure squeezed r=0.70",
        column: "i_pure",
        r: 0.70,
        value: |s| s.i_pure,
    },
    SurfaceSpec {
        name: "fig6e",
        title: "Error probability, mixed squeezed r=0.35",
        column: "pe_mixed",
        r: 0.35,
        value: |s| s.pe_mixed,
    },
    SurfaceSpec {
        name: "fig6f",
        title: "Information rate, mixed squeezed r=0.35",
        column: "i_mixed",
        r: 0.35,
        value: |s| s.i_mixed,
    },
    SurfaceSpec {
        name: "fig6g",
        title: "Error probability, mixed squeezed r=0.70",
        column: "pe_mixed",
        r: 0.70,
        value: |s| s.pe_mixed,
    },
    SurfaceSpec {
        name: "fig6h",
        title: "Information rate, mixed squeezed r=0.70",
        column: "i_mixed",
        r: 0.70,
        value: |s| s.i_mixed,
    },
    SurfaceSpec {
        name: "fig7a",
        title: "Homodyne error probability",
        column: "pe_homodyne",
        r: 0.0,
        value: |s| s.pe_homodyne.unwrap_or(f64::NAN),
    },
    SurfaceSpec {
        name: "fig8a",
        title: "Information gain, squeezed r=0.35",
        column: "i_gain",
        r: 0.35,
        value: |s| s.i_gain_emitted(),
    },
    SurfaceSpec {
        name: "fig8b",
        title: "Information gain, squeezed r=0.70",
        column: "i_gain",
        r: 0.70,
        value: |s| s.i_gain_emitted(),
    },
];

/// Names of every panel in output order.
pub fn panel_names() -> Vec<&'static str> {
    let mut names: Vec<&str> = SURFACES.iter().map(|s| s.name).collect();
    names.extend(["fig7b", "fig8c"]);
    names.sort();
    names
}

/// Squeezing levels the figures are drawn for.
pub fn figure_levels() -> Vec<SqueezeParameter> {
    SweepGrid::default().squeezing_levels
}

fn level_records(records: &[SweepRecord], r: f64) -> Vec<&SweepRecord> {
    records.iter().filter(|rec| rec.r == r).collect()
}

fn write_surface(
    spec: &SurfaceSpec,
    grid: &SweepGrid,
    records: &[SweepRecord],
    dir: &Path,
    formats: FormatSet,
) -> CliResult<()> {
    let recs = level_records(records, spec.r);
    if recs.len() != grid.nx * grid.np {
        return Err(CliError::Usage(format!("{}: sweep has no complete r = {} level", spec.name, spec.r)));
    }
    if formats.contains(Format::Csv) {
        let rows = recs.iter().map(|rec| [num(rec.x), num(rec.p), num((spec.value)(rec))]);
        let mut buf = Vec::new();
        write_table(&mut buf, &["x", "p", spec.column], rows)?;
        write_file(&dir.join(format!("{}.csv", spec.name)), &buf)?;
    }
    if formats.contains(Format::Svg) {
        let values: Vec<f64> = recs.iter().map(|rec| (spec.value)(rec)).collect();
        let title = format!("{} ({})", spec.title, spec.column);
        let svg = heatmap(&title, &grid.xs(), &grid.ps(), &values, "x", "p");
        write_file(&dir.join(format!("{}.svg", spec.name)), svg.as_bytes())?;
    }
    Ok(())
}

/// Row of the homodyne comparison along x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub x: f64,
    pub pe_homodyne: f64,
    pub pe_helstrom: f64,
    pub pe_mixed_slice: f64,
}

/// Homodyne error, closed-form optimal error and the N-level mixed error at
/// `p = 0.55` for every grid x.
pub fn homodyne_comparison(xs: &[f64], dim: usize) -> CliResult<Vec<ComparisonRow>> {
    xs.par_iter()
        .map(|&x| {
            let point = PhasePoint::new(x, MIXED_SLICE_P)?;
            let mixed = discriminate(point, StateFamily::coherent(), Mixedness::Mixed, dim)?;
            Ok(ComparisonRow {
                x,
                pe_homodyne: homodyne_error(x.abs())?,
                pe_helstrom: helstrom_pure_coherent(x),
                pe_mixed_slice: mixed.p_error,
            })
        })
        .collect()
}

pub fn write_comparison(name: &str, rows: &[ComparisonRow], dir: &Path, formats: FormatSet) -> CliResult<()> {
    if formats.contains(Format::Csv) {
        let mut buf = Vec::new();
        let table = rows.iter().map(|r| [num(r.x), num(r.pe_homodyne), num(r.pe_helstrom), num(r.pe_mixed_slice)]);
        write_table(&mut buf, &FIG7B_COLUMNS, table)?;
        write_file(&dir.join(format!("{name}.csv")), &buf)?;
    }
    if formats.contains(Format::Svg) {
        let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
        let series = [
            Series { name: "homodyne", ys: rows.iter().map(|r| r.pe_homodyne).collect(), dashed: false },
            Series { name: "optimal (pure)", ys: rows.iter().map(|r| r.pe_helstrom).collect(), dashed: false },
            Series {
                name: "optimal (mixed, p=0.55)",
                ys: rows.iter().map(|r| r.pe_mixed_slice).collect(),
                dashed: true,
            },
        ];
        let svg = line_chart("Optimal versus homodyne measurement", &xs, &series, "x", "error probability");
        write_file(&dir.join(format!("{name}.svg")), svg.as_bytes())?;
    }
    Ok(())
}

/// `max_p i_gain(x, p)` for each squeezing level, in grid-x order.
pub fn side_profile(grid: &SweepGrid, records: &[SweepRecord]) -> Vec<(f64, Vec<f64>)> {
    let xs = grid.xs();
    grid.squeezing_levels
        .iter()
        .map(|sq| {
            let mut best = vec![f64::NEG_INFINITY; xs.len()];
            for (k, rec) in level_records(records, sq.r()).into_iter().enumerate() {
                let g = emitted_gain(rec.i_gain);
                if g.is_finite() {
                    let slot = &mut best[k % xs.len()];
                    *slot = slot.max(g);
                }
            }
            let best = best.into_iter().map(|v| if v.is_finite() { v } else { f64::NAN }).collect();
            (sq.r(), best)
        })
        .collect()
}

fn write_side_profile(grid: &SweepGrid, records: &[SweepRecord], dir: &Path, formats: FormatSet) -> CliResult<()> {
    let xs = grid.xs();
    let profile = side_profile(grid, records);
    let names: Vec<String> = profile.iter().map(|(r, _)| format!("i_gain_max_r{}", num(*r))).collect();
    if formats.contains(Format::Csv) {
        let mut header = vec!["x"];
        header.extend(names.iter().map(String::as_str));
        let rows = xs.iter().enumerate().map(|(i, &x)| {
            let mut row = vec![num(x)];
            row.extend(profile.iter().map(|(_, v)| num(v[i])));
            row
        });
        let mut buf = Vec::new();
        write_table(&mut buf, &header, rows)?;
        write_file(&dir.join("fig8c.csv"), &buf)?;
    }
    if formats.contains(Format::Svg) {
        let series: Vec<Series> =
            profile.iter().zip(&names).map(|((_, ys), name)| Series { name, ys: ys.clone(), dashed: false }).collect();
        let svg = line_chart("Information gain, side-on profile", &xs, &series, "x", "max over p of I_gain");
        write_file(&dir.join("fig8c.svg"), svg.as_bytes())?;
    }
    Ok(())
}

/// Writes every panel, continuing past failures; returns the failed panel
/// names with their errors.
pub fn write_panels(
    grid: &SweepGrid,
    records: &[SweepRecord],
    dir: &Path,
    formats: FormatSet,
) -> Vec<(String, CliError)> {
    let mut failed = Vec::new();
    for spec in &SURFACES {
        if let Err(e) = write_surface(spec, grid, records, dir, formats) {
            failed.push((spec.name.to_string(), e));
        }
    }
    let comparison =
        homodyne_comparison(&grid.xs(), grid.dim).and_then(|rows| write_comparison("fig7b", &rows, dir, formats));
    if let Err(e) = comparison {
        failed.push(("fig7b".into(), e));
    }
    if let Err(e) = write_side_profile(grid, records, dir, formats) {
        failed.push(("fig8c".into(), e));
    }
    failed
}
