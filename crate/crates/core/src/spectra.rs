//! Trace distance and minimum error probability of difference operators.
//!
//! `D = ½ Σ|λⱼ|` over the eigenvalues of `A = ρ₀ - ρ₁`, and the optimal
//! (Helstrom) error for equiprobable hypotheses is `p_e = ½(1 - D)`.
//!
//! Besides the matrix path this module has two references that never touch
//! the Fock basis: the closed-form two-pure-state bound, and a Gram-matrix
//! solver that diagonalizes `A` inside the span of its ≤ 4 component states
//! using analytic overlaps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Result};
use crate::fock::{PhasePoint, SqueezeParameter};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::operators::{difference_operator, signed_components, HermitianOperator, Mixedness, StateFamily};

/// Excess of `D` over one that is reported before clamping.
pub const TRACE_DISTANCE_SLACK: f64 = 1e-9;

/// Eigenvalues of the Gram-reduced operator below this are treated as zero.
pub const GRAM_RANK_TOL: f64 = 1e-12;

/// Gram eigenvalues below this fraction of the trace span no direction.
pub const GRAM_NULL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationConfig {
    pub point: PhasePoint,
    pub family: StateFamily,
    pub mix: Mixedness,
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationResult {
    pub trace_distance: f64,
    pub p_error: f64,
    /// `Σ|λⱼ|` before halving and clamping.
    pub eigen_abs_sum: f64,
    pub config: DiscriminationConfig,
}

pub fn hermitian_eigenvalues(op: &HermitianOperator) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(op.matrix(), false)?.values)
}

fn clamp_distance(abs_sum: f64) -> f64 {
    let d = 0.5 * abs_sum;
    if d > 1.0 + TRACE_DISTANCE_SLACK {
        log::warn!("trace distance {d} exceeds 1; clamping");
    }
    d.clamp(0.0, 1.0)
}

/// `½ Σ|λⱼ|`, clamped to `[0, 1]`.
pub fn trace_distance(op: &HermitianOperator) -> Result<f64> {
    let abs_sum: f64 = hermitian_eigenvalues(op)?.iter().map(|l| l.abs()).sum();
    Ok(clamp_distance(abs_sum))
}

/// Builds `A` for the configuration and evaluates its trace distance and
/// optimal error probability.
pub fn discriminate(
    point: PhasePoint,
    family: StateFamily,
    mix: Mixedness,
    dim: usize,
) -> Result<DiscriminationResult> {
    let op = difference_operator(point, family, mix, dim)?;
    let eigen_abs_sum: f64 = hermitian_eigenvalues(&op)?.iter().map(|l| l.abs()).sum();
    let trace_distance = clamp_distance(eigen_abs_sum);
    Ok(DiscriminationResult {
        trace_distance,
        p_error: 0.5 * (1.0 - trace_distance),
        eigen_abs_sum,
        config: DiscriminationConfig { point, family, mix, dim },
    })
}

/// Helstrom error for two pure states with overlap `|z|²`:
/// `½(1 - √(1 - |z|²))`.
fn helstrom_from_overlap_deficit(one_minus_overlap_sq: f64) -> f64 {
    0.5 * (1.0 - one_minus_overlap_sq.max(0.0).sqrt())
}

/// `½(1 - √(1 - e^{-4x²}))` for `|x + ip⟩` versus `|-x + ip⟩`; independent of p.
pub fn helstrom_pure_coherent(x: f64) -> f64 {
    helstrom_from_overlap_deficit(-(-4.0 * x * x).exp_m1())
}

/// Pure-state bound for the x-squeezed pair, whose overlap is
/// `|z|² = e^{-4x² e^{2r}}`. Reduces to [`helstrom_pure_coherent`] at `r = 0`.
pub fn helstrom_pure(x: f64, sq: SqueezeParameter) -> f64 {
    helstrom_from_overlap_deficit(-(-4.0 * x * x * (2.0 * sq.r()).exp()).exp_m1())
}

/// `⟨a, r | b, r⟩` for displaced x-squeezed states with equal squeezing:
/// `exp(i Im(a* b)) exp(-(Δx² e^{2r} + Δp² e^{-2r}) / 2)`, `Δ = b - a`.
pub fn gaussian_overlap(a: PhasePoint, b: PhasePoint, sq: SqueezeParameter) -> Complex64 {
    let (dx, dp) = (b.x - a.x, b.p - a.p);
    let r = sq.r();
    let magnitude = (-0.5 * (dx * dx * (2.0 * r).exp() + dp * dp * (-2.0 * r).exp())).exp();
    let phase = (a.alpha().conj() * b.alpha()).im;
    Complex64::from_polar(magnitude, phase)
}

/// Nonzero eigenvalues (ascending) of `A = Σ wₖ |ψₖ⟩⟨ψₖ|` computed in the span
/// of the component states.
///
/// With Gram matrix `G = U Λ U†` and weights `W`, the nonzero spectrum of `A`
/// equals that of `Λ^{1/2} U† W U Λ^{1/2}`. Coincident components only shrink
/// the rank.
pub fn gram_oracle(point: PhasePoint, family: StateFamily, mix: Mixedness) -> Result<Vec<f64>> {
    let point = PhasePoint::new(point.x, point.p)?;
    ensure_finite("r", family.sq.r())?;
    let sq = family.effective_squeeze();
    let comps = signed_components(point, mix);
    let k = comps.len();
    let gram = CMatrix::from_fn(k, |i, j| gaussian_overlap(comps[i].1, comps[j].1, sq));
    let eig = hermitian_eigen(&gram, true)?;
    let u = eig.vectors.expect("vectors requested");
    // Gram eigenvalues at roundoff level belong to coincident components.
    let floor = GRAM_NULL_TOL * gram.trace().re;
    let root: Vec<f64> = eig.values.iter().map(|&l| if l > floor { l.sqrt() } else { 0.0 }).collect();

    let reduced = CMatrix::from_fn(k, |a, b| {
        let s: Complex64 = (0..k).map(|i| u[(i, a)].conj() * comps[i].0 * u[(i, b)]).sum();
        root[a] * s * root[b]
    });
    let values = hermitian_eigen(&reduced, false)?.values;
    Ok(values.into_iter().filter(|l| l.abs() > GRAM_RANK_TOL).collect())
}

/// Trace distance from [`gram_oracle`]; truncation-free.
pub fn gram_trace_distance(point: PhasePoint, family: StateFamily, mix: Mixedness) -> Result<f64> {
    let abs_sum: f64 = gram_oracle(point, family, mix)?.iter().map(|l| l.abs()).sum();
    Ok(clamp_distance(abs_sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{squeezed_amplitudes, MAX_DIM};

    fn pt(x: f64, p: f64) -> PhasePoint {
        PhasePoint::new(x, p).unwrap()
    }

    const SQRT_ONE_MINUS_INV_E: f64 = 0.795_060_097_620_650_1; // √(1 - e^{-1})

    #[test]
    fn pure_coherent_spectrum_is_plus_minus_root() {
        let op = difference_operator(pt(0.5, 0.0), StateFamily::coherent(), Mixedness::Pure, 50).unwrap();
        let ev = hermitian_eigenvalues(&op).unwrap();
        assert!((ev[0] + SQRT_ONE_MINUS_INV_E).abs() < 1e-10);
        assert!((ev[49] - SQRT_ONE_MINUS_INV_E).abs() < 1e-10);
        assert!(ev[1..49].iter().all(|l| l.abs() < 1e-8));
        let sum: f64 = ev.iter().sum();
        assert!((sum - op.trace().re).abs() < 1e-8);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = HermitianOperator::from_matrix(CMatrix::zeros(6));
        assert_eq!(trace_distance(&zero).unwrap(), 0.0);

        let mut diag = vec![0.0; 6];
        diag[0] = 1.0;
        diag[1] = -1.0;
        let orth = HermitianOperator::from_matrix(CMatrix::from_real_diagonal(&diag));
        assert_eq!(trace_distance(&orth).unwrap(), 1.0);

        for p in [0.0, 0.8, 2.5] {
            let res = discriminate(pt(0.5, p), StateFamily::coherent(), Mixedness::Pure, 50).unwrap();
            assert!((res.trace_distance - SQRT_ONE_MINUS_INV_E).abs() < 1e-6);
            assert_eq!(res.p_error, 0.5 * (1.0 - res.trace_distance));
        }
    }

    #[test]
    fn helstrom_closed_form() {
        assert_eq!(helstrom_pure_coherent(0.0), 0.5);
        assert_eq!(helstrom_pure_coherent(20.0), 0.0);
        let expected = 0.5 * (1.0 - SQRT_ONE_MINUS_INV_E);
        assert!((helstrom_pure_coherent(0.5) - expected).abs() < 1e-15);
        assert!((helstrom_pure_coherent(0.5) - 0.10247).abs() < 1e-5);
        assert_eq!(helstrom_pure(0.5, SqueezeParameter::NONE), helstrom_pure_coherent(0.5));
    }

    #[test]
    fn gram_oracle_examples() {
        assert!(gram_oracle(pt(0.0, 0.0), StateFamily::coherent(), Mixedness::Pure).unwrap().is_empty());
        assert!(gram_oracle(pt(0.0, 0.9), StateFamily::coherent(), Mixedness::Mixed).unwrap().is_empty());

        let ev = gram_oracle(pt(0.5, 0.3), StateFamily::coherent(), Mixedness::Pure).unwrap();
        assert_eq!(ev.len(), 2);
        assert!((ev[0] + SQRT_ONE_MINUS_INV_E).abs() < 1e-12);
        assert!((ev[1] - SQRT_ONE_MINUS_INV_E).abs() < 1e-12);

        let ev = gram_oracle(pt(0.5, 0.55), StateFamily::coherent(), Mixedness::Mixed).unwrap();
        assert_eq!(ev.len(), 4);
        let mut sorted_abs: Vec<f64> = ev.iter().map(|l| l.abs()).collect();
        sorted_abs.sort_by(f64::total_cmp);
        assert!((ev[0] + ev[3]).abs() < 1e-12 && (ev[1] + ev[2]).abs() < 1e-12);
        let d_gram = 0.5 * sorted_abs.iter().sum::<f64>();
        let d_matrix =
            discriminate(pt(0.5, 0.55), StateFamily::coherent(), Mixedness::Mixed, 50).unwrap().trace_distance;
        assert!((d_gram - d_matrix).abs() < 1e-8);
    }

    #[test]
    fn analytic_overlaps_match_truncated_inner_products() {
        for r in [0.0, 0.35, 0.7] {
            let sq = SqueezeParameter::new(r).unwrap();
            let a = pt(0.4, -0.6);
            let b = pt(-0.9, 0.3);
            let va = squeezed_amplitudes(a, sq, MAX_DIM).unwrap();
            let vb = squeezed_amplitudes(b, sq, MAX_DIM).unwrap();
            let truncated = va.inner(&vb).unwrap();
            assert!((truncated - gaussian_overlap(a, b, sq)).norm() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn squeezed_pure_matches_closed_form() {
        for (x, r) in [(0.3, 0.35), (0.5, 0.7), (1.0, 0.35)] {
            let sq = SqueezeParameter::new(r).unwrap();
            let res = discriminate(pt(x, 0.4), StateFamily::squeezed(sq), Mixedness::Pure, 50).unwrap();
            assert!((res.p_error - helstrom_pure(x, sq)).abs() < 1e-9);
        }
    }
}
