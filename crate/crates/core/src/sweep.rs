//! Grid evaluation over `(x, p, r)`.
//!
//! Every grid point is an independent work unit. Records come back ordered by
//! `(r, p, x)` whatever the scheduling, and a failing point becomes a flagged
//! record with NaN quantities instead of aborting the sweep.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::fock::{check_dim, PhasePoint, SqueezeParameter, DEFAULT_DIM, MAX_DIM};
use crate::homodyne::homodyne_error;
use crate::information::{emitted_gain, information_gain, InformationRates};
use crate::operators::{Mixedness, StateFamily};
use crate::spectra::{discriminate, helstrom_pure, DiscriminationResult};

/// Extra Fock levels used by the per-point truncation guard.
pub const GUARD_EXTRA_DIM: usize = 20;

/// A point is flagged when raising the truncation moves either error
/// probability by more than this.
pub const GUARD_TOL: f64 = 1e-8;

/// Every `AUDIT_STRIDE`-th point (in record order) is re-evaluated by
/// [`run_convergence_audit`].
pub const AUDIT_STRIDE: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
    pub dim: usize,
    pub squeezing_levels: Vec<SqueezeParameter>,
    /// Re-evaluate every point at `dim + GUARD_EXTRA_DIM` (capped at
    /// [`MAX_DIM`]) and flag truncation-sensitive points.
    pub guard: bool,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            x_min: 0.0,
            x_max: 2.5,
            p_min: 0.0,
            p_max: 2.5,
            nx: 51,
            np: 51,
            dim: DEFAULT_DIM,
            squeezing_levels: [0.0, 0.35, 0.70]
                .into_iter()
                .map(|r| SqueezeParameter::new(r).expect("valid default squeezing"))
                .collect(),
            guard: true,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
}

impl SweepGrid {
    /// A single point at every configured squeezing level.
    pub fn single(x: f64, p: f64, dim: usize, squeezing_levels: Vec<SqueezeParameter>) -> Self {
        Self { x_min: x, x_max: x, p_min: p, p_max: p, nx: 1, np: 1, dim, squeezing_levels, guard: true }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("x_min", self.x_min), ("x_max", self.x_max), ("p_min", self.p_min), ("p_max", self.p_max)] {
            ensure_finite(name, v)?;
        }
        if self.x_min > self.x_max || self.p_min > self.p_max {
            return Err(Error::Domain(format!(
                "empty grid range x [{}, {}], p [{}, {}]",
                self.x_min, self.x_max, self.p_min, self.p_max
            )));
        }
        if self.nx == 0 || self.np == 0 {
            return Err(Error::Domain("grid needs at least one step per axis".into()));
        }
        if self.squeezing_levels.is_empty() {
            return Err(Error::Domain("at least one squeezing level is required".into()));
        }
        check_dim(self.dim)?;
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn ps(&self) -> Vec<f64> {
        linspace(self.p_min, self.p_max, self.np)
    }

    pub fn len(&self) -> usize {
        self.nx * self.np * self.squeezing_levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn guard_dim(&self) -> Option<usize> {
        let hi = (self.dim + GUARD_EXTRA_DIM).min(MAX_DIM);
        (self.guard && hi > self.dim).then_some(hi)
    }

    /// Grid points in record order: `r` outermost, then `p`, then `x`.
    fn points(&self) -> Vec<(PhasePoint, SqueezeParameter)> {
        let (xs, ps) = (self.xs(), self.ps());
        let mut out = Vec::with_capacity(self.len());
        for &sq in &self.squeezing_levels {
            for &p in &ps {
                for &x in &xs {
                    out.push((PhasePoint { x, p }, sq));
                }
            }
        }
        out
    }
}

/// All quantities at one `(x, p, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub x: f64,
    pub p: f64,
    pub r: f64,
    pub pe_pure: f64,
    pub pe_mixed: f64,
    /// Present for `r = 0` only.
    pub pe_homodyne: Option<f64>,
    pub pe_helstrom_closed: f64,
    pub i_pure: f64,
    pub i_mixed: f64,
    /// Unclamped `i_pure - i_mixed`.
    pub i_gain: f64,
    /// Present for `r = 0` only.
    pub i_levitin: Option<f64>,
    /// Set when the point failed or its truncation guard exceeded
    /// [`GUARD_TOL`].
    pub convergence_flag: bool,
    /// Largest change in `pe_pure`/`pe_mixed` when the truncation is raised
    /// by [`GUARD_EXTRA_DIM`]; absent when the guard is off.
    pub guard_delta: Option<f64>,
}

impl SweepRecord {
    /// Gain with rounding dust clamped to zero.
    pub fn i_gain_emitted(&self) -> f64 {
        emitted_gain(self.i_gain)
    }

    fn failed(point: PhasePoint, sq: SqueezeParameter) -> Self {
        Self {
            x: point.x,
            p: point.p,
            r: sq.r(),
            pe_pure: f64::NAN,
            pe_mixed: f64::NAN,
            pe_homodyne: None,
            pe_helstrom_closed: f64::NAN,
            i_pure: f64::NAN,
            i_mixed: f64::NAN,
            i_gain: f64::NAN,
            i_levitin: None,
            convergence_flag: true,
            guard_delta: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub x: f64,
    pub p: f64,
    pub r: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub failures: Vec<PointFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Serial,
}

/// Pure and mixed discrimination at one point with its information rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEvaluation {
    pub pure: DiscriminationResult,
    pub mixed: DiscriminationResult,
    pub rates: InformationRates,
}

pub fn evaluate_point(point: PhasePoint, sq: SqueezeParameter, dim: usize) -> Result<PointEvaluation> {
    let family = StateFamily::for_squeezing(sq);
    let pure = discriminate(point, family, Mixedness::Pure, dim)?;
    let mixed = discriminate(point, family, Mixedness::Mixed, dim)?;
    let rates = information_gain(&pure, &mixed)?;
    Ok(PointEvaluation { pure, mixed, rates })
}

fn truncation_delta(point: PhasePoint, sq: SqueezeParameter, lo: &PointEvaluation, dim_hi: usize) -> Result<f64> {
    let hi = evaluate_point(point, sq, dim_hi)?;
    Ok((hi.pure.p_error - lo.pure.p_error).abs().max((hi.mixed.p_error - lo.mixed.p_error).abs()))
}

fn evaluate_record(
    point: PhasePoint,
    sq: SqueezeParameter,
    grid: &SweepGrid,
    homodyne: &BTreeMap<u64, f64>,
) -> Result<SweepRecord> {
    let eval = evaluate_point(point, sq, grid.dim)?;
    let guard_delta = match grid.guard_dim() {
        Some(hi) => Some(truncation_delta(point, sq, &eval, hi)?),
        None => None,
    };
    let coherent = sq.is_coherent();
    Ok(SweepRecord {
        x: point.x,
        p: point.p,
        r: sq.r(),
        pe_pure: eval.pure.p_error,
        pe_mixed: eval.mixed.p_error,
        pe_homodyne: if coherent { homodyne.get(&point.x.to_bits()).copied() } else { None },
        pe_helstrom_closed: helstrom_pure(point.x.abs(), sq),
        i_pure: eval.rates.i_pure,
        i_mixed: eval.rates.i_mixed,
        i_gain: eval.rates.i_gain,
        i_levitin: if coherent { eval.rates.levitin } else { None },
        convergence_flag: guard_delta.is_some_and(|d| d > GUARD_TOL),
        guard_delta,
    })
}

fn map_points<T, F>(points: &[(PhasePoint, SqueezeParameter)], execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(PhasePoint, SqueezeParameter) -> T + Sync,
{
    match execution {
        Execution::Parallel => points.par_iter().map(|&(pt, sq)| f(pt, sq)).collect(),
        Execution::Serial => points.iter().map(|&(pt, sq)| f(pt, sq)).collect(),
    }
}

fn log_failure(failures: &mut Vec<PointFailure>, point: PhasePoint, sq: SqueezeParameter, err: &Error) {
    log::warn!("point x={} p={} r={} failed: {err}", point.x, point.p, sq.r());
    failures.push(PointFailure { x: point.x, p: point.p, r: sq.r(), message: err.to_string() });
}

/// Evaluates every grid point on the current rayon pool.
pub fn run_sweep(grid: &SweepGrid) -> Result<SweepOutput> {
    run_sweep_with(grid, Execution::Parallel)
}

pub fn run_sweep_with(grid: &SweepGrid, execution: Execution) -> Result<SweepOutput> {
    grid.validate()?;
    let mut failures = Vec::new();

    let mut homodyne = BTreeMap::new();
    if grid.squeezing_levels.iter().any(|sq| sq.is_coherent()) {
        for x in grid.xs() {
            match homodyne_error(x.abs()) {
                Ok(v) => {
                    homodyne.insert(x.to_bits(), v);
                }
                Err(e) => {
                    log::warn!("homodyne error at x={x} failed: {e}");
                    failures.push(PointFailure { x, p: f64::NAN, r: 0.0, message: format!("homodyne: {e}") });
                }
            }
        }
    }

    let points = grid.points();
    let results = map_points(&points, execution, |pt, sq| evaluate_record(pt, sq, grid, &homodyne));
    let mut records = Vec::with_capacity(points.len());
    for ((pt, sq), res) in points.iter().zip(results) {
        match res {
            Ok(rec) => records.push(rec),
            Err(e) => {
                log_failure(&mut failures, *pt, *sq, &e);
                records.push(SweepRecord::failed(*pt, *sq));
            }
        }
    }
    Ok(SweepOutput { records, failures })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditPoint {
    pub x: f64,
    pub p: f64,
    pub r: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub dim: usize,
    pub dim_hi: usize,
    pub sampled: usize,
    pub max_delta: f64,
    /// `(r, max |Δpe|)` for each squeezing level in grid order.
    pub max_delta_by_r: Vec<(f64, f64)>,
    /// Sampled points whose shift exceeds [`GUARD_TOL`].
    pub flagged: Vec<AuditPoint>,
    pub failures: Vec<PointFailure>,
}

/// Re-evaluates every [`AUDIT_STRIDE`]-th point at `dim_hi` and reports the
/// largest shift of `pe_pure`/`pe_mixed`.
pub fn run_convergence_audit(grid: &SweepGrid, dim_hi: usize) -> Result<AuditSummary> {
    grid.validate()?;
    check_dim(dim_hi)?;
    if dim_hi <= grid.dim {
        return Err(Error::Domain(format!("audit dimension {dim_hi} must exceed grid dimension {}", grid.dim)));
    }
    let sample: Vec<_> = grid.points().into_iter().step_by(AUDIT_STRIDE).collect();
    let deltas = map_points(&sample, Execution::Parallel, |pt, sq| {
        let lo = evaluate_point(pt, sq, grid.dim)?;
        truncation_delta(pt, sq, &lo, dim_hi)
    });

    let mut by_r: Vec<(f64, f64)> = grid.squeezing_levels.iter().map(|sq| (sq.r(), 0.0)).collect();
    let mut flagged = Vec::new();
    let mut failures = Vec::new();
    let mut max_delta: f64 = 0.0;
    for ((pt, sq), res) in sample.iter().zip(deltas) {
        match res {
            Ok(delta) => {
                max_delta = max_delta.max(delta);
                if let Some(slot) = by_r.iter_mut().find(|(r, _)| *r == sq.r()) {
                    slot.1 = slot.1.max(delta);
                }
                if delta > GUARD_TOL {
                    flagged.push(AuditPoint { x: pt.x, p: pt.p, r: sq.r(), delta });
                }
            }
            Err(e) => log_failure(&mut failures, *pt, *sq, &e),
        }
    }
    Ok(AuditSummary {
        dim: grid.dim,
        dim_hi,
        sampled: sample.len(),
        max_delta,
        max_delta_by_r: by_r,
        flagged,
        failures,
    })
}
