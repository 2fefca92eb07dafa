//! Seeded random matrix ensembles used by the diagnostics and calibration runs.

use faer::Mat;
use num_complex::Complex64 as c64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::hilbert::DenseOperator;
use crate::propagator::StateVector;

pub type EnsembleRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> EnsembleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries i.i.d. with `E|z|^2 = 1`.
pub fn complex_gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat<c64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64::new(re * scale, im * scale)
    })
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix, with the
/// phases of `diag(R)` absorbed into `Q`.
pub fn haar_unitary<R: Rng>(rng: &mut R, dim: usize) -> Mat<c64> {
    let z = complex_gaussian_matrix(rng, dim, dim);
    let qr = z.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() == 0.0 {
            c64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for row in 0..dim {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Gaussian orthogonal ensemble: real symmetric, off-diagonal variance 1/2,
/// diagonal variance 1.
pub fn goe_matrix<R: Rng>(rng: &mut R, dim: usize) -> DenseOperator {
    let mut m = Mat::<c64>::zeros(dim, dim);
    for c in 0..dim {
        for r in c..dim {
            let x: f64 = StandardNormal.sample(rng);
            if r == c {
                m[(r, c)] = c64::new(x, 0.0);
            } else {
                let v = c64::new(x * std::f64::consts::FRAC_1_SQRT_2, 0.0);
                m[(r, c)] = v;
                m[(c, r)] = v;
            }
        }
    }
    DenseOperator::hermitian(m).expect("symmetric by construction")
}

/// Complex Hermitian matrix from the Gaussian unitary ensemble.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> DenseOperator {
    let z = complex_gaussian_matrix(rng, dim, dim);
    let m = Mat::from_fn(dim, dim, |r, c| (z[(r, c)] + z[(c, r)].conj()) * 0.5);
    DenseOperator::hermitian(m).expect("Hermitian by construction")
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    let z = complex_gaussian_matrix(rng, dim, 1);
    StateVector::normalized((0..dim).map(|i| z[(i, 0)]).collect()).expect("nonzero Gaussian vector")
}

/// `n` ascending levels with i.i.d. unit-mean exponential gaps.
pub fn poisson_levels<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut level = 0.0;
    (0..n)
        .map(|_| {
            let gap: f64 = Exp1.sample(rng);
            level += gap;
            level
        })
        .collect()
}
