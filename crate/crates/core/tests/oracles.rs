//! Independent references for the Fock amplitudes, the closed-form operator
//! entries and the matrix-path spectra.

use num_complex::Complex64;
use proptest::prelude::*;

use gsd_core::fock::{squeezed_amplitudes, PhasePoint, SqueezeParameter};
use gsd_core::operators::{density_operator_from_vectors, difference_operator, Mixedness, StateFamily};
use gsd_core::spectra::{discriminate, gram_trace_distance, hermitian_eigenvalues};

/// Normalized number-state wavefunctions for `[x̂, p̂] = i/2`, evaluated at `q`
/// by the three-term recurrence in `y = √2 q`.
fn number_wavefunctions(q: f64, count: usize) -> Vec<f64> {
    let y = 2f64.sqrt() * q;
    let mut out = Vec::with_capacity(count);
    let scale = 2f64.powf(0.25);
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp();
    for n in 0..count {
        out.push(scale * cur);
        let next = (2.0 / (n as f64 + 1.0)).sqrt() * y * cur - (n as f64 / (n as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// `⟨q | x + ip, r⟩`: x-squeezed vacuum of variance `e^{-2r}/4`, translated by
/// `x` and boosted by `p`.
fn squeezed_wavefunction(q: f64, x: f64, p: f64, r: f64) -> Complex64 {
    let k = (2.0 * r).exp();
    let envelope = (2.0 * k / std::f64::consts::PI).powf(0.25) * (-k * (q - x) * (q - x)).exp();
    Complex64::from_polar(envelope, 2.0 * p * q - p * x)
}

/// `⟨n | ψ⟩` by trapezoidal quadrature in position space; the integrands are
/// smooth and Gaussian-decaying, so the rule converges spectrally.
fn position_space_amplitudes(x: f64, p: f64, r: f64, count: usize) -> Vec<Complex64> {
    let (lo, hi, h) = (-12.0 + x.min(0.0), 12.0 + x.max(0.0), 2e-3);
    let steps = ((hi - lo) / h).round() as usize;
    let mut acc = vec![Complex64::new(0.0, 0.0); count];
    for i in 0..=steps {
        let q = lo + h * i as f64;
        let w = if i == 0 || i == steps { 0.5 * h } else { h };
        let psi = squeezed_wavefunction(q, x, p, r);
        for (a, phi) in acc.iter_mut().zip(number_wavefunctions(q, count)) {
            *a += w * phi * psi;
        }
    }
    acc
}

#[test]
fn squeezed_amplitudes_match_position_space_quadrature() {
    for &(x, p, r) in &[(0.0, 0.0, 0.35), (0.5, 0.7, 0.35), (-1.2, 0.4, 0.7), (1.5, -1.0, 0.7), (0.8, 0.3, 0.0)] {
        let count = 30;
        let oracle = position_space_amplitudes(x, p, r, count);
        let sq = SqueezeParameter::new(r).unwrap();
        let v = squeezed_amplitudes(PhasePoint::new(x, p).unwrap(), sq, count).unwrap();
        for (n, (a, b)) in v.amps().iter().zip(&oracle).enumerate() {
            assert!((a - b).norm() < 1e-10, "({x}, {p}, {r}) n={n}: {a} vs {b}");
        }
    }
}

fn outer_product_operator(point: PhasePoint, sq: SqueezeParameter, mix: Mixedness, dim: usize) -> Vec<Complex64> {
    let vec_at = |x: f64, p: f64| squeezed_amplitudes(PhasePoint::new(x, p).unwrap(), sq, dim).unwrap();
    let (x, p) = (point.x, point.p);
    let (rho0, rho1) = match mix {
        Mixedness::Pure => (vec![(1.0, vec_at(x, p))], vec![(1.0, vec_at(-x, p))]),
        Mixedness::Mixed => {
            (vec![(0.5, vec_at(x, p)), (0.5, vec_at(x, -p))], vec![(0.5, vec_at(-x, p)), (0.5, vec_at(-x, -p))])
        }
    };
    let a = density_operator_from_vectors(&rho0).unwrap();
    let b = density_operator_from_vectors(&rho1).unwrap();
    let diff = a.difference(&b).unwrap();
    (0..dim).flat_map(|n| (0..dim).map(move |m| (n, m))).map(|(n, m)| diff.entry(n, m)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn closed_form_entries_match_outer_products(
        x in -1.5f64..1.5,
        p in -1.5f64..1.5,
        r in prop::sample::select(vec![0.0, 0.35, 0.7]),
        mixed in any::<bool>(),
    ) {
        let dim = 30;
        let sq = SqueezeParameter::new(r).unwrap();
        let mix = if mixed { Mixedness::Mixed } else { Mixedness::Pure };
        let point = PhasePoint::new(x, p).unwrap();
        let op = difference_operator(point, StateFamily::for_squeezing(sq), mix, dim).unwrap();
        let reference = outer_product_operator(point, sq, mix, dim);
        for (k, want) in reference.iter().enumerate() {
            let got = op.entry(k / dim, k % dim);
            prop_assert!((got - want).norm() < 1e-10, "entry {k}: {got} vs {want}");
        }
    }

    #[test]
    fn matrix_path_matches_gram_oracle(
        x in 0.0f64..1.5,
        p in 0.0f64..1.5,
        r in prop::sample::select(vec![0.0, 0.35, 0.7]),
        mixed in any::<bool>(),
    ) {
        let sq = SqueezeParameter::new(r).unwrap();
        let family = StateFamily::for_squeezing(sq);
        let mix = if mixed { Mixedness::Mixed } else { Mixedness::Pure };
        let point = PhasePoint::new(x, p).unwrap();
        let matrix = discriminate(point, family, mix, 60).unwrap().trace_distance;
        let gram = gram_trace_distance(point, family, mix).unwrap();
        prop_assert!((matrix - gram).abs() < 1e-7, "{matrix} vs {gram}");
    }

    #[test]
    fn spectrum_is_symmetric_under_p_mirror(
        x in -2.0f64..2.0,
        p in -2.0f64..2.0,
        r in prop::sample::select(vec![0.0, 0.35, 0.7]),
        mixed in any::<bool>(),
    ) {
        let family = StateFamily::for_squeezing(SqueezeParameter::new(r).unwrap());
        let mix = if mixed { Mixedness::Mixed } else { Mixedness::Pure };
        let a = difference_operator(PhasePoint::new(x, p).unwrap(), family, mix, 40).unwrap();
        let b = difference_operator(PhasePoint::new(x, -p).unwrap(), family, mix, 40).unwrap();
        let (ea, eb) = (hermitian_eigenvalues(&a).unwrap(), hermitian_eigenvalues(&b).unwrap());
        for (u, v) in ea.iter().zip(&eb) {
            prop_assert!((u - v).abs() < 1e-10);
        }
    }
}
