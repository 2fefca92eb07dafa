//! Single-site reduced states and spin expectations along trajectories.

use faer::{Mat, MatRef};
use num_complex::Complex64 as c64;

use crate::error::{AcrError, Result};
use crate::exec::Execution;
use crate::hilbert::{local_spin_operators, ChainGeometry, LocalSpinOperators, Spin};
use crate::propagator::{for_each_grid_chunk, StateVector};
use crate::spectral::SpectralDecomposition;

/// Reduced density matrix of one site, in the highest-weight-first order.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    pub site: usize,
    pub rho: Mat<c64>,
}

impl ReducedDensityMatrix {
    pub fn trace(&self) -> c64 {
        (0..self.rho.nrows()).map(|i| self.rho[(i, i)]).sum()
    }

    pub fn purity(&self) -> f64 {
        let g = self.rho.nrows();
        let mut p = 0.0;
        for r in 0..g {
            for c in 0..g {
                p += self.rho[(r, c)].norm_sqr();
            }
        }
        p
    }
}

fn reduced_from_column(amps: impl Fn(usize) -> c64, site: usize, geom: &ChainGeometry) -> Mat<c64> {
    let g = geom.local_dim();
    let stride = geom.stride(site);
    let block = stride * g;
    let mut rho = Mat::<c64>::zeros(g, g);
    for hi in (0..geom.dim()).step_by(block) {
        for lo in 0..stride {
            let base = hi + lo;
            for r in 0..g {
                let a = amps(base + r * stride);
                if a == c64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..g {
                    rho[(r, c)] += a * amps(base + c * stride).conj();
                }
            }
        }
    }
    rho
}

/// Partial trace over every site except `site`, by index arithmetic.
pub fn reduced_density(psi: &StateVector, site: usize, geom: &ChainGeometry) -> Result<ReducedDensityMatrix> {
    geom.check_site(site)?;
    if psi.dim() != geom.dim() {
        return Err(AcrError::DimensionMismatch {
            expected: geom.dim(),
            got: psi.dim(),
        });
    }
    let a = psi.amplitudes();
    Ok(ReducedDensityMatrix {
        site,
        rho: reduced_from_column(|i| a[i], site, geom),
    })
}

/// Spin expectations of one site plus purity and Bloch norm `|<S>|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinExpectation {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub purity: f64,
    pub bloch_norm: f64,
}

impl SpinExpectation {
    pub fn vector(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    /// Components divided by `S`, so a fully polarized spin has unit length.
    pub fn normalized(&self, spin: Spin) -> SpinExpectation {
        let s = spin.value();
        SpinExpectation {
            sx: self.sx / s,
            sy: self.sy / s,
            sz: self.sz / s,
            purity: self.purity,
            bloch_norm: self.bloch_norm / s,
        }
    }
}

fn trace_product(rho: MatRef<'_, c64>, op: MatRef<'_, c64>) -> f64 {
    let g = rho.nrows();
    let mut t = c64::new(0.0, 0.0);
    for r in 0..g {
        for c in 0..g {
            t += rho[(r, c)] * op[(c, r)];
        }
    }
    t.re
}

fn expectations_with(rho: MatRef<'_, c64>, ops: &LocalSpinOperators) -> SpinExpectation {
    let sx = trace_product(rho, ops.sx.as_ref());
    let sy = trace_product(rho, ops.sy.as_ref());
    let sz = trace_product(rho, ops.sz.as_ref());
    let mut purity = 0.0;
    for r in 0..rho.nrows() {
        for c in 0..rho.ncols() {
            purity += rho[(r, c)].norm_sqr();
        }
    }
    SpinExpectation {
        sx,
        sy,
        sz,
        purity,
        bloch_norm: (sx * sx + sy * sy + sz * sz).sqrt(),
    }
}

pub fn spin_expectations(rho: &ReducedDensityMatrix, spin: Spin) -> SpinExpectation {
    expectations_with(rho.rho.as_ref(), &local_spin_operators(spin))
}

/// Per-site spin records sampled on a time grid.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub sites: Vec<usize>,
    /// `records[s][t]` for `sites[s]` at `times[t]`.
    pub records: Vec<Vec<SpinExpectation>>,
}

impl TimeSeries {
    pub fn site(&self, site: usize) -> Option<&[SpinExpectation]> {
        self.sites
            .iter()
            .position(|&s| s == site)
            .map(|i| self.records[i].as_slice())
    }

    /// Checks `|S|^2 <= S^2 + 1e-10` and `1/g - 1e-10 <= purity <= 1 + 1e-10`.
    pub fn check_bounds(&self, spin: Spin) -> bool {
        let s = spin.value();
        let g = spin.local_dim() as f64;
        self.records.iter().flatten().all(|e| {
            e.bloch_norm * e.bloch_norm <= s * s + 1e-10 && e.purity >= 1.0 / g - 1e-10 && e.purity <= 1.0 + 1e-10
        })
    }
}

/// `n` uniform points on `[0, t_max]` inclusive.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn scan_time_series(
    decomp: &SpectralDecomposition,
    psi0: &StateVector,
    sites: &[usize],
    grid: &[f64],
    geom: &ChainGeometry,
) -> Result<TimeSeries> {
    scan_time_series_with(decomp, psi0, sites, grid, geom, Execution::default())
}

pub fn scan_time_series_with(
    decomp: &SpectralDecomposition,
    psi0: &StateVector,
    sites: &[usize],
    grid: &[f64],
    geom: &ChainGeometry,
    exec: Execution,
) -> Result<TimeSeries> {
    for &s in sites {
        geom.check_site(s)?;
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(AcrError::InvalidProblem("time grid must be sorted ascending".into()));
    }
    if decomp.dim() != geom.dim() {
        return Err(AcrError::DimensionMismatch {
            expected: geom.dim(),
            got: decomp.dim(),
        });
    }
    let ops = local_spin_operators(geom.spin());
    let per_time = for_each_grid_chunk(decomp, psi0, grid, exec, |_, states| {
        (0..states.ncols())
            .map(|t| {
                let col = states.col(t);
                sites
                    .iter()
                    .map(|&site| {
                        let rho = reduced_from_column(|i| col[i], site, geom);
                        expectations_with(rho.as_ref(), &ops)
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    })?;
    let records = (0..sites.len())
        .map(|s| per_time.iter().map(|row| row[s]).collect())
        .collect();
    Ok(TimeSeries {
        times: grid.to_vec(),
        sites: sites.to_vec(),
        records,
    })
}
