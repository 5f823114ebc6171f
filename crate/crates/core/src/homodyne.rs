//! Error probability of x-quadrature homodyne detection.
//!
//! Hypotheses `|±x + ip⟩` give Gaussian outcome densities centred at `±x`. For
//! an outcome `m` the conditional error is the relative weight of the farther
//! hypothesis, and the reported error averages it against `P(m | x + ip)` over
//! `m > 0` (doubled for the mirror half). That average lies above the
//! nearest-centre error `½ erfc(√2 x)`. The p displacement drops out, so the
//! same value applies to the pure and mixed configurations. Channel
//! transmission is unity.

use std::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};
use crate::quadrature::{integrate, Integral, DEFAULT_MAX_SUBDIVISIONS};

/// Absolute tolerance for the error integrals.
pub const HOMODYNE_ABS_TOL: f64 = 1e-10;

/// The integrals run over `[0, x + CUTOFF_MARGIN]`.
pub const CUTOFF_MARGIN: f64 = 8.0;

/// Outcome density `P(m | ±x + ip) = √(2/π) e^{-2(m ∓ x)²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcomeDensity {
    pub x_center: f64,
}

impl QuadratureOutcomeDensity {
    pub fn new(x_center: f64) -> Self {
        Self { x_center }
    }

    pub fn density(&self, m: f64) -> f64 {
        let d = m - self.x_center;
        (2.0 / PI).sqrt() * (-2.0 * d * d).exp()
    }

    /// Total probability over a window wide enough that the truncated mass is
    /// far below the tolerance.
    pub fn total_probability(&self) -> Result<Integral> {
        integrate(
            |m| self.density(m),
            self.x_center - 10.0,
            self.x_center + 10.0,
            HOMODYNE_ABS_TOL * 1e-2,
            DEFAULT_MAX_SUBDIVISIONS,
        )
    }
}

/// Probability of a wrong decision given outcome `m`:
/// `e^{-2(m+x)²} / (e^{-2(m-x)²} + e^{-2(m+x)²})` for `m > 0`, mirrored for
/// `m < 0`, and `1/2` at the tie `m = 0`. Written as `1 / (1 + e^{8|m|x})`.
pub fn conditional_error(m: f64, x: f64) -> f64 {
    if m == 0.0 {
        return 0.5;
    }
    1.0 / (1.0 + (8.0 * m.abs() * x).exp())
}

fn check_separation(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if x < 0.0 {
        return Err(Error::Domain(format!("homodyne separation x must be >= 0, got {x}")));
    }
    Ok(x)
}

fn log_tail_bound(x: f64) {
    // ∫_{x+c}^∞ e^{-2(m-x)²} dm ≤ e^{-2c²} / (4c)
    let c = CUTOFF_MARGIN;
    let bound = (8.0 / PI).sqrt() * (-2.0 * c * c).exp() / (4.0 * c);
    log::trace!("homodyne integral at x={x}: neglected tail below {bound:e}");
}

/// Averaged homodyne error
/// `√(8/π) ∫₀^∞ dm / (e^{2(m+x)²} + e^{2(m-x)²})`.
pub fn homodyne_error(x: f64) -> Result<f64> {
    let x = check_separation(x)?;
    if x == 0.0 {
        // Integrand reduces to ½ e^{-2m²}; √(8/π) · ½ · √(π/8) = ½.
        return Ok(0.5);
    }
    log_tail_bound(x);
    let integrand = |m: f64| {
        // 1 / (e^a + e^b) = e^{-a} / (1 + e^{b-a}), where b - a = -8mx ≤ 0
        let a = 2.0 * (m + x) * (m + x);
        (-a).exp() / (1.0 + (-8.0 * m * x).exp())
    };
    let integral =
        integrate(integrand, 0.0, x + CUTOFF_MARGIN, HOMODYNE_ABS_TOL / (8.0 / PI).sqrt(), DEFAULT_MAX_SUBDIVISIONS)?;
    Ok(((8.0 / PI).sqrt() * integral.value).clamp(0.0, 0.5))
}

/// The same average before simplification,
/// `2 ∫₀^∞ conditional_error(m, x) P(m | x + ip) dm`.
pub fn homodyne_error_from_conditional(x: f64) -> Result<f64> {
    let x = check_separation(x)?;
    let density = QuadratureOutcomeDensity::new(x);
    let integral = integrate(
        |m| 2.0 * conditional_error(m, x) * density.density(m),
        0.0,
        x + CUTOFF_MARGIN,
        HOMODYNE_ABS_TOL * 1e-1,
        DEFAULT_MAX_SUBDIVISIONS,
    )?;
    Ok(integral.value)
}
