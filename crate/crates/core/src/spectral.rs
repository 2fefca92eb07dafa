//! Hermitian eigendecomposition and level-spacing statistics.

use faer::{Mat, MatRef, Par, Side};
use num_complex::Complex64 as c64;

use crate::error::{AcrError, Result};
use crate::hilbert::DenseOperator;
use crate::linalg::{self, combine, complex_product_with, real_part, real_times_complex};

/// Eigenvector storage. Real symmetric input keeps a real basis, which halves
/// memory and makes every downstream product a pair of real gemms.
#[derive(Debug, Clone)]
pub enum Eigenvectors {
    Real(Mat<f64>),
    Complex(Mat<c64>),
}

/// `H = Q diag(lambda) Q^dagger` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Eigenvectors,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Eigenvectors {
        &self.eigenvectors
    }

    pub fn is_real(&self) -> bool {
        matches!(self.eigenvectors, Eigenvectors::Real(_))
    }

    pub fn eigenvectors_complex(&self) -> Mat<c64> {
        match &self.eigenvectors {
            Eigenvectors::Real(q) => Mat::from_fn(q.nrows(), q.ncols(), |r, c| c64::new(q[(r, c)], 0.0)),
            Eigenvectors::Complex(q) => q.clone(),
        }
    }

    /// Eigenbasis coefficients `Q^dagger psi`.
    pub fn to_eigenbasis(&self, psi: &[c64]) -> Vec<c64> {
        let n = self.dim();
        assert_eq!(psi.len(), n);
        match &self.eigenvectors {
            Eigenvectors::Real(q) => (0..n)
                .map(|k| {
                    let col = q.col(k);
                    psi.iter().enumerate().map(|(i, &p)| p * col[i]).sum()
                })
                .collect(),
            Eigenvectors::Complex(q) => (0..n)
                .map(|k| {
                    let col = q.col(k);
                    psi.iter().enumerate().map(|(i, &p)| col[i].conj() * p).sum()
                })
                .collect(),
        }
    }

    /// `Q Z` for a block of eigenbasis coefficient columns.
    pub(crate) fn expand_eigenbasis(&self, coeffs: MatRef<'_, c64>, par: Par) -> Mat<c64> {
        match &self.eigenvectors {
            Eigenvectors::Real(q) => real_times_complex(q.as_ref(), coeffs, par),
            Eigenvectors::Complex(q) => complex_product_with(q.as_ref(), coeffs, par),
        }
    }

    /// `sum_k Q[r, k] w_k conj(Q[c, k])` for the selected 0-based rows and columns.
    pub fn weighted_block(&self, weights: &[c64], rows: &[usize], cols: &[usize]) -> Mat<c64> {
        let n = self.dim();
        assert_eq!(weights.len(), n);
        let par = linalg::par();
        match &self.eigenvectors {
            Eigenvectors::Real(q) => {
                let left = Mat::<f64>::from_fn(rows.len(), n, |r, k| q[(rows[r], k)]);
                let right_re = Mat::<f64>::from_fn(n, cols.len(), |k, c| weights[k].re * q[(cols[c], k)]);
                let right_im = Mat::<f64>::from_fn(n, cols.len(), |k, c| weights[k].im * q[(cols[c], k)]);
                let re = &left * &right_re;
                let im = &left * &right_im;
                combine(&re, &im)
            }
            Eigenvectors::Complex(q) => {
                let left = Mat::<c64>::from_fn(rows.len(), n, |r, k| q[(rows[r], k)]);
                let right = Mat::<c64>::from_fn(n, cols.len(), |k, c| weights[k] * q[(cols[c], k)].conj());
                complex_product_with(left.as_ref(), right.as_ref(), par)
            }
        }
    }

    /// `(max |H Q - Q Lambda|, max |Q^dagger Q - I|)`.
    pub fn residuals(&self, h: &DenseOperator) -> (f64, f64) {
        let q = self.eigenvectors_complex();
        let hq = linalg::complex_product(h.matrix().as_ref(), q.as_ref());
        let mut recon: f64 = 0.0;
        for c in 0..q.ncols() {
            for r in 0..q.nrows() {
                recon = recon.max((hq[(r, c)] - q[(r, c)] * self.eigenvalues[c]).norm());
            }
        }
        let qh = q.adjoint().to_owned();
        let ortho = linalg::identity_residual(linalg::complex_product(qh.as_ref(), q.as_ref()).as_ref());
        (recon, ortho)
    }
}

pub fn spectral_decompose(h: &DenseOperator) -> Result<SpectralDecomposition> {
    if !h.is_hermitian() {
        return Err(AcrError::NotHermitian(crate::hilbert::hermiticity_residual(
            h.matrix().as_ref(),
        )));
    }
    let m = h.matrix();
    if linalg::is_real(m.as_ref()) {
        let real = real_part(m.as_ref());
        let evd = real
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| AcrError::EigenFailure)?;
        let eigenvalues = evd.S().column_vector().iter().copied().collect();
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors: Eigenvectors::Real(evd.U().to_owned()),
        })
    } else {
        let evd = m.self_adjoint_eigen(Side::Lower).map_err(|_| AcrError::EigenFailure)?;
        let eigenvalues = evd.S().column_vector().iter().map(|z| z.re).collect();
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors: Eigenvectors::Complex(evd.U().to_owned()),
        })
    }
}

/// Mean consecutive-gap ratio `<min(d_n, d_n+1) / max(d_n, d_n+1)>` over an
/// ascending spectrum. Gaps below 1e-12 count as degenerate and give `r = 0`.
///
/// Applied to a full spectrum this mixes symmetry sectors (momentum for a
/// translation-invariant ring), which pulls the statistic toward the
/// Poisson value.
pub fn level_spacing_ratio(eigenvalues: &[f64]) -> Result<f64> {
    if eigenvalues.len() < 3 {
        return Err(AcrError::TooFewLevels {
            needed: 3,
            got: eigenvalues.len(),
        });
    }
    let gaps: Vec<f64> = eigenvalues.windows(2).map(|w| w[1] - w[0]).collect();
    let total: f64 = gaps
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0].min(w[1]), w[0].max(w[1]));
            if lo <= 1e-12 || hi <= 1e-12 {
                0.0
            } else {
                lo / hi
            }
        })
        .sum();
    Ok(total / (gaps.len() - 1) as f64)
}
