//! Shannon information rates derived from error probabilities.
//!
//! A binary discrimination with error `p` behaves as a binary symmetric
//! channel of capacity `1 - H₂(p)`. The gain `I_gain = I_pure - I_mixed`
//! measures how much information is lost by mixing the hypotheses over ±p.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::spectra::DiscriminationResult;

/// Gains with magnitude below this are emitted as zero in surfaces.
pub const GAIN_CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationRates {
    pub i_pure: f64,
    pub i_mixed: f64,
    /// `i_pure - i_mixed`, unclamped.
    pub i_gain: f64,
    /// Accessible-information bound; present for the coherent family only.
    pub levitin: Option<f64>,
}

/// `x log₂ x`, with the limit `0` at `x = 0`.
fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Capacity `1 + p log₂ p + (1 - p) log₂(1 - p)` of a binary symmetric channel
/// with crossover probability `p ∈ [0, ½]`.
pub fn shannon_bsc(p_error: f64) -> Result<f64> {
    ensure_finite("p_error", p_error)?;
    if !(0.0..=0.5).contains(&p_error) {
        return Err(Error::Domain(format!("p_error must lie in [0, 0.5], got {p_error}")));
    }
    if p_error == 0.0 {
        return Ok(1.0);
    }
    if p_error == 0.5 {
        return Ok(0.0);
    }
    let q = 1.0 - p_error;
    let capacity = 1.0 + xlog2x(p_error) + q * (-p_error).ln_1p() / std::f64::consts::LN_2;
    Ok(capacity.clamp(0.0, 1.0))
}

/// Accessible information for `|x + ip⟩` versus `|-x + ip⟩`:
/// `½(1+s) log₂(1+s) + ½(1-s) log₂(1-s)` with `s = √(1 - e^{-4x²})`.
pub fn levitin_bound(x: f64, p: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    ensure_finite("p", p)?;
    let s = (-(-4.0 * x * x).exp_m1()).sqrt();
    if s == 0.0 {
        return Ok(0.0);
    }
    let value = 0.5 * (xlog2x(1.0 + s) + xlog2x(1.0 - s));
    Ok(value.clamp(0.0, 1.0))
}

fn check_compatible(pure: &DiscriminationResult, mixed: &DiscriminationResult) -> Result<()> {
    let (a, b) = (&pure.config, &mixed.config);
    if a.point != b.point || a.family != b.family || a.dim != b.dim {
        return Err(Error::Mismatch(format!(
            "pure result at {:?}/{:?}/N={} cannot pair with mixed result at {:?}/{:?}/N={}",
            a.point, a.family, a.dim, b.point, b.family, b.dim
        )));
    }
    Ok(())
}

/// Rates for a pure/mixed pair evaluated at the same point, family and
/// truncation.
pub fn information_gain(pure: &DiscriminationResult, mixed: &DiscriminationResult) -> Result<InformationRates> {
    check_compatible(pure, mixed)?;
    let i_pure = shannon_bsc(pure.p_error)?;
    let i_mixed = shannon_bsc(mixed.p_error)?;
    let config = pure.config;
    let levitin = if config.family.is_coherent() { Some(levitin_bound(config.point.x, config.point.p)?) } else { None };
    Ok(InformationRates { i_pure, i_mixed, i_gain: i_pure - i_mixed, levitin })
}

/// Gain as written to surfaces: rounding dust below [`GAIN_CLAMP`] becomes 0.
pub fn emitted_gain(raw: f64) -> f64 {
    if raw.abs() < GAIN_CLAMP {
        0.0
    } else {
        raw
    }
}
