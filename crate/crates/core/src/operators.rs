//! Difference operators `A = ρ₀ - ρ₁` in the Fock basis.
//!
//! Hypothesis 0 is centred at `+x`, hypothesis 1 at `-x`. In the pure
//! configuration each hypothesis is the single state `|±x + ip⟩`; in the mixed
//! configuration each is the equal mixture of `|±x + ip⟩` and `|±x - ip⟩`.
//!
//! Production entries come from the closed-form matrix-element expressions.
//! [`density_operator_from_vectors`] builds the same operators from outer
//! products of amplitude vectors and is kept as an independent check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{check_dim, hermite_factors, squeezed_gamma, PhasePoint, SqueezeParameter, TruncatedStateVector};
use crate::linalg::CMatrix;

/// Allowed deviation of the mixture weights from summing to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Coherent,
    Squeezed,
}

/// Which Gaussian states make up the hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateFamily {
    pub kind: FamilyKind,
    /// Ignored for [`FamilyKind::Coherent`].
    pub sq: SqueezeParameter,
}

impl StateFamily {
    pub fn coherent() -> Self {
        Self { kind: FamilyKind::Coherent, sq: SqueezeParameter::NONE }
    }

    pub fn squeezed(sq: SqueezeParameter) -> Self {
        Self { kind: FamilyKind::Squeezed, sq }
    }

    /// Coherent for `r = 0`, squeezed otherwise.
    pub fn for_squeezing(sq: SqueezeParameter) -> Self {
        if sq.r() == 0.0 {
            Self::coherent()
        } else {
            Self::squeezed(sq)
        }
    }

    /// The squeezing that actually enters the formulas; zero for coherent
    /// states and for squeezing below the dispatch threshold.
    pub fn effective_squeeze(&self) -> SqueezeParameter {
        match self.kind {
            FamilyKind::Squeezed if !self.sq.is_coherent() => self.sq,
            _ => SqueezeParameter::NONE,
        }
    }

    pub fn is_coherent(&self) -> bool {
        self.effective_squeeze().is_coherent()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mixedness {
    Pure,
    Mixed,
}

/// Signed components of `A = ρ₀ - ρ₁`: `A = Σ wₖ |ψ(pointₖ)⟩⟨ψ(pointₖ)|`.
/// The first half of the list belongs to `ρ₀` (positive weights).
pub fn signed_components(point: PhasePoint, mix: Mixedness) -> Vec<(f64, PhasePoint)> {
    let minus = point.mirrored_x();
    match mix {
        Mixedness::Pure => vec![(1.0, point), (-1.0, minus)],
        Mixedness::Mixed => vec![(0.5, point), (0.5, point.mirrored_p()), (-0.5, minus), (-0.5, minus.mirrored_p())],
    }
}

/// Dense Hermitian matrix, symmetrized at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    /// Symmetrizes `matrix`, remembering how far from Hermitian it was.
    pub fn from_matrix(mut matrix: CMatrix) -> Self {
        let hermiticity_defect = matrix.hermiticity_defect();
        if hermiticity_defect > 0.0 {
            log::debug!("symmetrizing operator with hermiticity defect {hermiticity_defect:e}");
        }
        matrix.symmetrize();
        Self { matrix, hermiticity_defect }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        self.matrix[(n, m)]
    }

    /// Largest `|A_nm - conj(A_mn)|` before symmetrization.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Mismatch(format!("operator dims {} and {}", self.dim(), other.dim())));
        }
        let n = self.dim();
        Ok(Self::from_matrix(CMatrix::from_fn(n, |i, j| self.matrix[(i, j)] - other.matrix[(i, j)])))
    }
}

/// `ln k!` for `k < dim`, accumulated as a running sum of logarithms.
fn ln_factorials(dim: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(dim);
    let mut acc = 0.0;
    for k in 0..dim {
        if k > 1 {
            acc += (k as f64).ln();
        }
        out.push(acc);
    }
    out
}

/// `e^{-|w|²/2} wⁿ / √(n!)` evaluated in log-magnitude / phase form.
fn coherent_factors(w: Complex64, ln_fact: &[f64]) -> Vec<Complex64> {
    let half_gauss = -0.5 * w.norm_sqr();
    if w.norm() == 0.0 {
        let mut out = vec![Complex64::new(0.0, 0.0); ln_fact.len()];
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    let ln_mag = w.norm().ln();
    let arg = w.arg();
    ln_fact
        .iter()
        .enumerate()
        .map(|(n, lf)| {
            let n = n as f64;
            Complex64::from_polar((n * ln_mag - 0.5 * lf + half_gauss).exp(), n * arg)
        })
        .collect()
}

/// `A = ρ₀ - ρ₁` for the given configuration, from the closed-form elements.
///
/// Coherent pure:
/// `⟨n|A|m⟩ = e^{-x²-p²} (n! m!)^{-1/2} [(x+ip)ⁿ(x-ip)ᵐ - (-x+ip)ⁿ(-x-ip)ᵐ]`.
///
/// Squeezed pure (`r > 0`):
/// `⟨n|A|m⟩ = (n! m!)^{-1/2} / cosh r · (½ tanh r)^{(n+m)/2}
///           · exp[-(x² + p² + tanh r (x² - p²))] [H_n(γ)H_m(γ*) - H_n(γ')H_m(γ'*)]`
/// with Hermite arguments scaled by `(sinh 2r)^{-1/2}`.
///
/// The mixed variants add the `p -> -p` partners with half weight, using
/// `γ'' = γ*` and `γ''' = γ'*` for the squeezed case.
pub fn difference_operator(
    point: PhasePoint,
    family: StateFamily,
    mix: Mixedness,
    dim: usize,
) -> Result<HermitianOperator> {
    let point = PhasePoint::new(point.x, point.p)?;
    SqueezeParameter::new(family.sq.r())?;
    check_dim(dim)?;

    let sq = family.effective_squeeze();
    // Per-index factor sequences for the `+x` and `-x` states, plus an overall
    // real prefactor.
    let (plus, minus, prefactor) = if sq.is_coherent() {
        let ln_fact = ln_factorials(dim);
        (coherent_factors(point.alpha(), &ln_fact), coherent_factors(point.mirrored_x().alpha(), &ln_fact), 1.0)
    } else {
        let r = sq.r();
        let (x, p) = (point.x, point.p);
        let prefactor = (-(x * x + p * p + r.tanh() * (x * x - p * p))).exp() / r.cosh();
        (
            hermite_factors(squeezed_gamma(point.alpha(), r), r, dim),
            hermite_factors(squeezed_gamma(point.mirrored_x().alpha(), r), r, dim),
            prefactor,
        )
    };

    let mut matrix = CMatrix::zeros(dim);
    for n in 0..dim {
        for m in 0..dim {
            let bracket = match mix {
                Mixedness::Pure => plus[n] * plus[m].conj() - minus[n] * minus[m].conj(),
                Mixedness::Mixed => {
                    0.5 * (plus[n] * plus[m].conj() + plus[n].conj() * plus[m]
                        - minus[n] * minus[m].conj()
                        - minus[n].conj() * minus[m])
                }
            };
            let entry = prefactor * bracket;
            if !(entry.re.is_finite() && entry.im.is_finite()) {
                return Err(Error::Assembly { row: n, col: m, reason: format!("entry evaluated to {entry}") });
            }
            matrix[(n, m)] = entry;
        }
    }
    Ok(HermitianOperator::from_matrix(matrix))
}

/// `Σ wᵢ |vᵢ⟩⟨vᵢ|` for nonnegative weights summing to one.
pub fn density_operator_from_vectors(components: &[(f64, TruncatedStateVector)]) -> Result<HermitianOperator> {
    let Some((_, first)) = components.first() else {
        return Err(Error::Domain("density operator needs at least one component".into()));
    };
    let dim = first.dim();
    let mut total = 0.0;
    for (i, (w, v)) in components.iter().enumerate() {
        if !w.is_finite() || *w < 0.0 {
            return Err(Error::Domain(format!("weight {i} is {w}; weights must be >= 0")));
        }
        if v.dim() != dim {
            return Err(Error::Assembly {
                row: i,
                col: v.dim(),
                reason: format!("component {i} has dim {} but expected {dim}", v.dim()),
            });
        }
        total += w;
    }
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::Domain(format!("weights sum to {total}, expected 1")));
    }

    let mut matrix = CMatrix::zeros(dim);
    for (w, v) in components {
        let a = v.amps();
        for n in 0..dim {
            for m in 0..dim {
                matrix[(n, m)] += *w * a[n] * a[m].conj();
            }
        }
    }
    Ok(HermitianOperator::from_matrix(matrix))
}
