//! Dense complex matrices and a Hermitian eigensolver.
//!
//! The eigensolver reduces the matrix to real symmetric tridiagonal form with
//! Householder reflections plus a diagonal phase rotation, then runs implicit
//! QL with Wilkinson-style shifts. Eigenvectors are optional; the sweep only
//! needs eigenvalues.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 60;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Replaces `A` with `(A + A†)/2`.
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            self[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..self.n {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)].conj());
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix; values ascending, vectors as
/// columns in the same order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Option<CMatrix>,
}

/// Eigenvalues (ascending) and optionally eigenvectors of a Hermitian matrix.
/// The input is symmetrized first, so a slightly non-Hermitian matrix is
/// treated as its Hermitian part.
pub fn hermitian_eigen(a: &CMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    let n = a.dim();
    if n == 0 {
        return Ok(HermitianEigen { values: vec![], vectors: want_vectors.then(|| CMatrix::zeros(0)) });
    }
    let mut m = a.clone();
    m.symmetrize();
    let mut q = want_vectors.then(|| CMatrix::identity(n));
    tridiagonalize(&mut m, q.as_mut());

    let mut diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phases = vec![ONE; n];
    for i in 0..n - 1 {
        let e = m[(i + 1, i)];
        let mag = e.norm();
        off[i] = mag;
        phases[i + 1] = if mag > 0.0 { phases[i] * (e / mag) } else { phases[i] };
    }

    let mut z = want_vectors.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    });
    tridiagonal_ql(&mut diag, &mut off, z.as_deref_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();

    let vectors = match (q, z) {
        (Some(q), Some(z)) => {
            // V = Q · diag(phases) · Z, columns permuted into ascending order.
            let mut qd = q;
            for r in 0..n {
                for k in 0..n {
                    qd[(r, k)] *= phases[k];
                }
            }
            let mut v = CMatrix::zeros(n);
            for r in 0..n {
                let row = qd.row(r).to_vec();
                for (c, &j) in order.iter().enumerate() {
                    v[(r, c)] = row.iter().enumerate().map(|(k, q)| q * z[k * n + j]).sum();
                }
            }
            Some(v)
        }
        _ => None,
    };
    Ok(HermitianEigen { values, vectors })
}

/// Householder reduction of a Hermitian matrix (held in full storage) to
/// tridiagonal form. On return `m` is tridiagonal with possibly complex
/// off-diagonals and `q`, if given, satisfies `A = Q T Q†`.
fn tridiagonalize(m: &mut CMatrix, mut q: Option<&mut CMatrix>) {
    let n = m.dim();
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    let negligible = f64::EPSILON * m.frobenius_norm();
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let tail: f64 = (lo + 1..n).map(|i| m[(i, k)].norm_sqr()).sum();
        if tail.sqrt() <= negligible {
            // Already tridiagonal up to roundoff; a reflector built from
            // such entries would underflow.
            for i in lo + 1..n {
                m[(i, k)] = ZERO;
                m[(k, i)] = ZERO;
            }
            continue;
        }
        let head = m[(lo, k)];
        let sigma = (tail + head.norm_sqr()).sqrt();
        let phase = if head.norm() > 0.0 { head / head.norm() } else { ONE };

        for i in lo..n {
            v[i] = m[(i, k)];
        }
        v[lo] += phase * sigma;
        let vnorm2: f64 = (lo..n).map(|i| v[i].norm_sqr()).sum();
        let beta = 2.0 / vnorm2;

        // p = β A v ; K = β (v† p) / 2 ; q = p - K v ; A -= v q† + q v†
        for (i, pi) in p.iter_mut().enumerate().take(n).skip(lo) {
            let row = &m.row(i)[lo..];
            *pi = beta * row.iter().zip(&v[lo..]).map(|(a, b)| a * b).sum::<Complex64>();
        }
        let vp: Complex64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        let kk = 0.5 * beta * vp.re;
        for i in lo..n {
            p[i] -= kk * v[i];
        }
        for i in lo..n {
            let (vi, pi) = (v[i], p[i]);
            for j in lo..n {
                let delta = vi * p[j].conj() + pi * v[j].conj();
                m[(i, j)] -= delta;
            }
        }

        let sub = -phase * sigma;
        m[(lo, k)] = sub;
        m[(k, lo)] = sub.conj();
        for i in lo + 1..n {
            m[(i, k)] = ZERO;
            m[(k, i)] = ZERO;
        }

        if let Some(q) = q.as_deref_mut() {
            // Q <- Q (I - β v v†)
            for r in 0..n {
                let w: Complex64 = (lo..n).map(|j| q[(r, j)] * v[j]).sum();
                let w = beta * w;
                for j in lo..n {
                    q[(r, j)] -= w * v[j].conj();
                }
            }
        }
        for x in v.iter_mut().chain(p.iter_mut()) {
            *x = ZERO;
        }
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i+1`, last entry unused).
/// Eigenvalues overwrite `d`; `z` (row-major, n×n) accumulates rotations.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    // Couplings at roundoff level relative to the whole matrix are dropped;
    // this perturbs eigenvalues by no more than the reduction already did.
    let norm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    let floor = f64::EPSILON * norm;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                let off_diagonal_norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
                return Err(Error::NoConvergence { off_diagonal_norm });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let zi = z[k * n + i];
                        let zi1 = z[k * n + i + 1];
                        z[k * n + i + 1] = s * zi + c * zi1;
                        z[k * n + i] = c * zi - s * zi1;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
