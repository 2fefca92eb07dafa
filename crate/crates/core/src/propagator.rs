//! Exact propagators `u(t) = Q diag(exp(-i lambda t)) Q^dagger`, grid evolution,
//! and the matrix participation ratio.

use faer::{Mat, MatRef, Par};
use num_complex::Complex64 as c64;

use crate::error::{AcrError, Result};
use crate::exec::Execution;
use crate::hilbert::DenseOperator;
use crate::linalg;
use crate::spectral::{Eigenvectors, SpectralDecomposition};

/// Normalization slack accepted on inputs to evolution.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Time points evolved together in one gemm.
const GRID_CHUNK: usize = 32;

/// A many-body amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<c64>);

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<c64>) -> Self {
        StateVector(amplitudes)
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(amplitudes: Vec<c64>) -> Result<Self> {
        let mut s = StateVector(amplitudes);
        let n = s.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(AcrError::NotNormalized(n));
        }
        s.0.iter_mut().for_each(|a| *a /= n);
        Ok(s)
    }

    pub fn basis(dim: usize, offset: usize) -> Self {
        let mut v = vec![c64::new(0.0, 0.0); dim];
        v[offset] = c64::new(1.0, 0.0);
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.0
    }

    pub fn into_amplitudes(self) -> Vec<c64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> c64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(AcrError::NotNormalized(n));
        }
        Ok(())
    }
}

/// `<psi|A|psi>`.
pub fn expectation(op: &DenseOperator, psi: &StateVector) -> c64 {
    let a_psi = op.apply(psi.amplitudes());
    psi.amplitudes().iter().zip(&a_psi).map(|(p, q)| p.conj() * q).sum()
}

fn phases(eigenvalues: &[f64], t: f64) -> Vec<c64> {
    eigenvalues.iter().map(|&l| c64::from_polar(1.0, -l * t)).collect()
}

/// The evolution operator of a decomposed Hamiltonian at a fixed time.
#[derive(Debug, Clone, Copy)]
pub struct Propagator<'a> {
    pub decomposition: &'a SpectralDecomposition,
    pub tau: f64,
}

impl<'a> Propagator<'a> {
    pub fn new(decomposition: &'a SpectralDecomposition, tau: f64) -> Self {
        Self { decomposition, tau }
    }

    pub fn matrix(&self) -> DenseOperator {
        propagator_matrix(self.decomposition, self.tau)
    }

    /// Selected entries `u[rows, cols]` (0-based) without forming `u`.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Mat<c64> {
        let w = phases(self.decomposition.eigenvalues(), self.tau);
        self.decomposition.weighted_block(&w, rows, cols)
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let coeffs = self.decomposition.to_eigenbasis(psi.amplitudes());
        let out = evolve_chunk(self.decomposition, &coeffs, &[self.tau], linalg::par());
        StateVector((0..out.nrows()).map(|i| out[(i, 0)]).collect())
    }
}

pub fn propagator_matrix(decomp: &SpectralDecomposition, tau: f64) -> DenseOperator {
    let n = decomp.dim();
    let par = linalg::par();
    let w = phases(decomp.eigenvalues(), tau);
    let u = match decomp.eigenvectors() {
        Eigenvectors::Real(q) => {
            let scaled_re = Mat::<f64>::from_fn(n, n, |r, k| q[(r, k)] * w[k].re);
            let scaled_im = Mat::<f64>::from_fn(n, n, |r, k| q[(r, k)] * w[k].im);
            let mut re = Mat::<f64>::zeros(n, n);
            let mut im = Mat::<f64>::zeros(n, n);
            faer::linalg::matmul::matmul(
                re.as_mut(),
                faer::Accum::Replace,
                scaled_re.as_ref(),
                q.transpose(),
                1.0,
                par,
            );
            drop(scaled_re);
            faer::linalg::matmul::matmul(
                im.as_mut(),
                faer::Accum::Replace,
                scaled_im.as_ref(),
                q.transpose(),
                1.0,
                par,
            );
            linalg::combine(&re, &im)
        }
        Eigenvectors::Complex(q) => {
            let scaled = Mat::<c64>::from_fn(n, n, |r, k| q[(r, k)] * w[k]);
            let qh = q.adjoint().to_owned();
            linalg::complex_product_with(scaled.as_ref(), qh.as_ref(), par)
        }
    };
    DenseOperator::new(u).expect("square by construction")
}

/// `Q diag(exp(-i lambda t)) c` for every `t` in `times`, one column per time.
pub(crate) fn evolve_chunk(decomp: &SpectralDecomposition, coeffs: &[c64], times: &[f64], par: Par) -> Mat<c64> {
    let lambda = decomp.eigenvalues();
    let z = Mat::<c64>::from_fn(coeffs.len(), times.len(), |k, t| {
        coeffs[k] * c64::from_polar(1.0, -lambda[k] * times[t])
    });
    decomp.expand_eigenbasis(z.as_ref(), par)
}

/// Evolves `psi0` to every time in `times`, processing chunks of the grid
/// with the given strategy. Each chunk is evaluated independently, so the
/// result does not depend on the strategy.
pub(crate) fn for_each_grid_chunk<T, F>(
    decomp: &SpectralDecomposition,
    psi0: &StateVector,
    times: &[f64],
    exec: Execution,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, MatRef<'_, c64>) -> Vec<T> + Sync + Send,
{
    if psi0.dim() != decomp.dim() {
        return Err(AcrError::DimensionMismatch {
            expected: decomp.dim(),
            got: psi0.dim(),
        });
    }
    psi0.check_normalized()?;
    let coeffs = decomp.to_eigenbasis(psi0.amplitudes());
    let starts: Vec<usize> = (0..times.len()).step_by(GRID_CHUNK).collect();
    let inner_par = match exec {
        Execution::Parallel => Par::Seq,
        Execution::Sequential => linalg::par(),
    };
    let chunks = exec.map_slice(&starts, |&start| {
        let end = (start + GRID_CHUNK).min(times.len());
        let states = evolve_chunk(decomp, &coeffs, &times[start..end], inner_par);
        f(start, states.as_ref())
    });
    Ok(chunks.into_iter().flatten().collect())
}

pub fn evolve_on_grid(decomp: &SpectralDecomposition, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
    evolve_on_grid_with(decomp, psi0, times, Execution::default())
}

pub fn evolve_on_grid_with(
    decomp: &SpectralDecomposition,
    psi0: &StateVector,
    times: &[f64],
    exec: Execution,
) -> Result<Vec<StateVector>> {
    for_each_grid_chunk(decomp, psi0, times, exec, |_, states| {
        (0..states.ncols())
            .map(|t| StateVector((0..states.nrows()).map(|i| states[(i, t)]).collect()))
            .collect()
    })
}

/// `<psi(t)|H|psi(t)>` on the grid, computed with the matrix `h` rather than
/// the spectrum, so it checks the decomposition as well as the evolution.
pub fn energy_series(
    h: &DenseOperator,
    decomp: &SpectralDecomposition,
    psi0: &StateVector,
    times: &[f64],
    exec: Execution,
) -> Result<Vec<f64>> {
    if h.dim() != decomp.dim() {
        return Err(AcrError::DimensionMismatch {
            expected: decomp.dim(),
            got: h.dim(),
        });
    }
    let inner_par = match exec {
        Execution::Parallel => Par::Seq,
        Execution::Sequential => linalg::par(),
    };
    for_each_grid_chunk(decomp, psi0, times, exec, |_, states| {
        let hs = linalg::complex_product_with(h.matrix().as_ref(), states, inner_par);
        (0..states.ncols())
            .map(|t| {
                (0..states.nrows())
                    .map(|i| (states[(i, t)].conj() * hs[(i, t)]).re)
                    .sum()
            })
            .collect()
    })
}

/// `max_t |E(t) - E(0)|` divided by the spectral radius of `H`.
pub fn relative_energy_drift(energies: &[f64], decomp: &SpectralDecomposition) -> f64 {
    let scale = decomp
        .eigenvalues()
        .iter()
        .fold(0.0f64, |m, l| m.max(l.abs()))
        .max(f64::MIN_POSITIVE);
    let e0 = energies.first().copied().unwrap_or(0.0);
    energies.iter().fold(0.0f64, |m, e| m.max((e - e0).abs())) / scale
}

/// Raw participation ratio and its value divided by `D^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticipationRatio {
    pub raw: f64,
    pub normalized: f64,
}

/// `(sum |u_ij|^2)^2 / sum |u_ij|^4`. Ranges from 1 (single entry) to `D^2`
/// (all moduli equal); `normalized` near 1 indicates a fully spread propagator.
pub fn mpr(u: MatRef<'_, c64>) -> Result<ParticipationRatio> {
    if u.nrows() != u.ncols() {
        return Err(AcrError::DimensionMismatch {
            expected: u.nrows(),
            got: u.ncols(),
        });
    }
    let (mut s2, mut s4) = (0.0f64, 0.0f64);
    for c in 0..u.ncols() {
        for r in 0..u.nrows() {
            let a = u[(r, c)].norm_sqr();
            s2 += a;
            s4 += a * a;
        }
    }
    if s4 == 0.0 {
        return Err(AcrError::ZeroMatrix);
    }
    let raw = s2 * s2 / s4;
    let d = u.nrows() as f64;
    Ok(ParticipationRatio {
        raw,
        normalized: raw / (d * d),
    })
}
