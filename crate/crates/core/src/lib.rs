//! Minimum-error distinguishability of pairs of Gaussian optical states.
//!
//! The crate compares two hypotheses built from coherent or x-squeezed states
//! displaced symmetrically about the p axis:
//!
//! - **pure**: `|x + ip⟩` versus `|-x + ip⟩`;
//! - **mixed**: the equal mixture of `|x ± ip⟩` versus that of `|-x ± ip⟩`.
//!
//! For each configuration it builds `A = ρ₀ - ρ₁` in a truncated Fock basis
//! ([`fock`], [`operators`]), diagonalizes it ([`spectra`]) to get the trace
//! distance and the optimal error probability, converts that to a Shannon rate
//! ([`information`]), and compares against x-quadrature homodyne detection
//! ([`homodyne`]). [`sweep`] evaluates whole `(x, p, r)` grids.
//!
//! ```
//! use gsd_core::fock::PhasePoint;
//! use gsd_core::operators::{Mixedness, StateFamily};
//! use gsd_core::spectra::{discriminate, helstrom_pure_coherent};
//!
//! let point = PhasePoint::new(0.5, 0.0).unwrap();
//! let res = discriminate(point, StateFamily::coherent(), Mixedness::Pure, 50).unwrap();
//! assert!((res.p_error - helstrom_pure_coherent(0.5)).abs() < 1e-10);
//! ```

pub mod error;
pub mod fock;
pub mod homodyne;
pub mod information;
pub mod linalg;
pub mod operators;
pub mod quadrature;
pub mod spectra;
pub mod sweep;

pub use error::{Error, Result};
