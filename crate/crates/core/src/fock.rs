//! Truncated Fock-basis expansions of coherent and displaced squeezed states.
//!
//! Quadratures follow the ħ = 1/2 convention: `a = x̂ + i p̂`, the vacuum has
//! quadrature variance 1/4, and a coherent state displaced by `(x, p)` has
//! amplitude `α = x + i p`. Squeezing is always along the x quadrature
//! (squeezing angle fixed to zero), so the x variance of a squeezed state is
//! `e^{-2r}/4`.
//!
//! Amplitudes are never formed from factorials or large powers directly. The
//! coherent expansion uses the ratio `c_{n+1} = c_n α / √(n+1)`, and the
//! squeezed expansion folds `(½ tanh r)^{n/2} / √(n!)` into a rescaled Hermite
//! recurrence (see [`hermite_factors`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Largest supported truncation size (and Hermite degree).
pub const MAX_DIM: usize = 200;

/// Default truncation size.
pub const DEFAULT_DIM: usize = 50;

/// Squeezing magnitudes below this are treated as coherent states.
pub const COHERENT_DISPATCH_R: f64 = 1e-12;

/// Slack allowed on the norm of a truncated vector.
pub const NORM_EPS: f64 = 1e-12;

/// A phase-space displacement `α = x + i p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Result<Self> {
        ensure_finite("x", x)?;
        ensure_finite("p", p)?;
        Ok(Self { x, p })
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.x, self.p)
    }

    /// Reflection through the p axis, `(x, p) -> (-x, p)`.
    pub fn mirrored_x(&self) -> Self {
        Self { x: -self.x, p: self.p }
    }

    /// Reflection through the x axis, `(x, p) -> (x, -p)`.
    pub fn mirrored_p(&self) -> Self {
        Self { x: self.x, p: -self.p }
    }
}

/// Squeezing magnitude `r ≥ 0` along the x quadrature.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SqueezeParameter(f64);

impl SqueezeParameter {
    pub const NONE: SqueezeParameter = SqueezeParameter(0.0);

    pub fn new(r: f64) -> Result<Self> {
        ensure_finite("r", r)?;
        if r < 0.0 {
            return Err(Error::Domain(format!("squeezing r must be >= 0, got {r}")));
        }
        Ok(Self(r))
    }

    pub fn r(&self) -> f64 {
        self.0
    }

    /// `10 log10(e^{-2r})`; negative for any nonzero squeezing.
    pub fn decibels(&self) -> f64 {
        if self.0 == 0.0 {
            return 0.0;
        }
        -20.0 * self.0 / std::f64::consts::LN_10
    }

    /// True when the coherent formulas are used in place of the squeezed ones.
    pub fn is_coherent(&self) -> bool {
        self.0 < COHERENT_DISPATCH_R
    }
}

/// Amplitudes `c_0 … c_{N-1}` of a state in the Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedStateVector {
    amps: Vec<Complex64>,
    tail_mass: f64,
}

impl TruncatedStateVector {
    /// Wraps amplitudes of a unit-norm state truncated to `amps.len()` levels.
    /// The tail mass is `1 - Σ|c_n|²`.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Domain("state vector must have dim >= 1".into()));
        }
        if let Some(n) = amps.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Domain(format!("amplitude {n} is not finite")));
        }
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if norm > 1.0 + NORM_EPS {
            return Err(Error::Domain(format!("truncated norm {norm} exceeds 1 by more than {NORM_EPS:e}")));
        }
        Ok(Self { amps, tail_mass: 1.0 - norm })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Probability mass lost to truncation.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Mismatch(format!("inner product of dim {} and dim {}", self.dim(), other.dim())));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::Domain(format!("dim must be in 1..={MAX_DIM}, got {dim}")))
    } else {
        Ok(())
    }
}

/// Fock amplitudes of the coherent state `|x + i p⟩`,
/// `c_n = e^{-|α|²/2} αⁿ / √(n!)`.
pub fn coherent_amplitudes(point: PhasePoint, dim: usize) -> Result<TruncatedStateVector> {
    PhasePoint::new(point.x, point.p)?;
    check_dim(dim)?;
    let alpha = point.alpha();
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        amps.push(c);
        c = c * alpha / ((n + 1) as f64).sqrt();
    }
    TruncatedStateVector::new(amps)
}

/// Fock amplitudes of the displaced squeezed vacuum `D(α) S(r) |0⟩`,
///
/// ```text
/// ⟨n|α, r⟩ = (n! cosh r)^{-1/2} exp[-½(|α|² + α*² tanh r)]
///            (½ tanh r)^{n/2} H_n[γ (sinh 2r)^{-1/2}],
/// γ = α cosh r + α* sinh r.
/// ```
///
/// For `r < COHERENT_DISPATCH_R` this returns exactly [`coherent_amplitudes`].
pub fn squeezed_amplitudes(point: PhasePoint, sq: SqueezeParameter, dim: usize) -> Result<TruncatedStateVector> {
    PhasePoint::new(point.x, point.p)?;
    SqueezeParameter::new(sq.r())?;
    check_dim(dim)?;
    if sq.is_coherent() {
        return coherent_amplitudes(point, dim);
    }
    let r = sq.r();
    let alpha = point.alpha();
    let ground = ((-0.5) * (alpha.norm_sqr() + alpha.conj() * alpha.conj() * r.tanh())).exp() / r.cosh().sqrt();
    let amps = hermite_factors(squeezed_gamma(alpha, r), r, dim).into_iter().map(|h| ground * h).collect();
    TruncatedStateVector::new(amps)
}

/// `γ = α cosh r + α* sinh r` (squeezing angle zero).
pub(crate) fn squeezed_gamma(alpha: Complex64, r: f64) -> Complex64 {
    alpha * r.cosh() + alpha.conj() * r.sinh()
}

/// The rescaled Hermite sequence
/// `u_n = (½ tanh r)^{n/2} H_n(γ (sinh 2r)^{-1/2}) / √(n!)` for `n < dim`.
///
/// With `z = γ (sinh 2r)^{-1/2}` and `t = (½ tanh r)^{1/2}`, the Hermite
/// recurrence becomes
/// `u_{n+1} = (2zt / √(n+1)) u_n - 2t² √(n/(n+1)) u_{n-1}`,
/// whose terms stay bounded where `H_n` itself overflows. Requires `r > 0`.
/// Because the coefficients `2t²` are real, `u_n(γ*) = conj(u_n(γ))`.
pub(crate) fn hermite_factors(gamma: Complex64, r: f64, dim: usize) -> Vec<Complex64> {
    debug_assert!(r > 0.0);
    let t = (0.5 * r.tanh()).sqrt();
    let z = gamma / (2.0 * r).sinh().sqrt();
    let lead = 2.0 * t * z;
    let damp = 2.0 * t * t;
    let mut out = Vec::with_capacity(dim);
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for n in 0..dim {
        out.push(cur);
        let k = n as f64;
        let next = lead / (k + 1.0).sqrt() * cur - damp * (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// Physicists' Hermite polynomial `H_n(z)` by the three-term recurrence
/// `H_{n+1} = 2z H_n - 2n H_{n-1}`.
pub fn hermite_eval(degree: usize, z: Complex64) -> Result<Complex64> {
    ensure_finite("Re z", z.re)?;
    ensure_finite("Im z", z.im)?;
    if degree > MAX_DIM {
        return Err(Error::Domain(format!("Hermite degree {degree} exceeds supported maximum {MAX_DIM}")));
    }
    let mut prev = Complex64::new(1.0, 0.0);
    if degree == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * z;
    for n in 1..degree {
        let next = 2.0 * z * cur - 2.0 * n as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
