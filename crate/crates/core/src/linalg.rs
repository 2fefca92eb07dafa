//! Dense helpers on top of faer: real/imaginary splitting for fast complex
//! products, residual norms, and a 1-norm condition estimator for LU factors.

use faer::linalg::matmul::matmul;
use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Accum, Mat, MatRef, Par};
use num_complex::Complex64 as c64;

pub(crate) fn par() -> Par {
    faer::get_global_parallelism()
}

pub fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut w: f64 = 0.0;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            w = w.max(m[(r, c)].norm());
        }
    }
    w
}

/// `max |M - I|`.
pub fn identity_residual(m: MatRef<'_, c64>) -> f64 {
    let mut w: f64 = 0.0;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let target = if r == c { 1.0 } else { 0.0 };
            w = w.max((m[(r, c)] - c64::new(target, 0.0)).norm());
        }
    }
    w
}

pub(crate) fn is_real(m: MatRef<'_, c64>) -> bool {
    (0..m.ncols()).all(|c| (0..m.nrows()).all(|r| m[(r, c)].im == 0.0))
}

pub(crate) fn real_part(m: MatRef<'_, c64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)].re)
}

pub(crate) fn imag_part(m: MatRef<'_, c64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)].im)
}

pub(crate) fn combine(re: &Mat<f64>, im: &Mat<f64>) -> Mat<c64> {
    Mat::from_fn(re.nrows(), re.ncols(), |r, c| c64::new(re[(r, c)], im[(r, c)]))
}

fn real_product(a: MatRef<'_, f64>, b: MatRef<'_, f64>, par: Par) -> Mat<f64> {
    let mut out = Mat::<f64>::zeros(a.nrows(), b.ncols());
    matmul(out.as_mut(), Accum::Replace, a, b, 1.0, par);
    out
}

/// `a * b` for a real left factor and complex right factor.
pub(crate) fn real_times_complex(a: MatRef<'_, f64>, b: MatRef<'_, c64>, par: Par) -> Mat<c64> {
    let re = real_product(a, real_part(b).as_ref(), par);
    let im = real_product(a, imag_part(b).as_ref(), par);
    combine(&re, &im)
}

/// Complex product through three real products (Gauss/3M). Faer's real gemm
/// is markedly faster than its complex kernel on large operands.
pub fn complex_product(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Mat<c64> {
    complex_product_with(a, b, par())
}

pub(crate) fn complex_product_with(a: MatRef<'_, c64>, b: MatRef<'_, c64>, par: Par) -> Mat<c64> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions must agree");
    let (ar, ai) = (real_part(a), imag_part(a));
    let (br, bi) = (real_part(b), imag_part(b));
    let p1 = real_product(ar.as_ref(), br.as_ref(), par);
    let p2 = real_product(ai.as_ref(), bi.as_ref(), par);
    let sa = &ar + &ai;
    let sb = &br + &bi;
    drop((ar, ai, br, bi));
    let p3 = real_product(sa.as_ref(), sb.as_ref(), par);
    Mat::from_fn(p1.nrows(), p1.ncols(), |r, c| {
        c64::new(p1[(r, c)] - p2[(r, c)], p3[(r, c)] - p1[(r, c)] - p2[(r, c)])
    })
}

/// `max |U^dagger U - I|`.
pub fn unitarity_residual(u: MatRef<'_, c64>) -> f64 {
    let adj = u.adjoint().to_owned();
    identity_residual(complex_product(adj.as_ref(), u).as_ref())
}

fn norm1(m: MatRef<'_, c64>) -> f64 {
    (0..m.ncols())
        .map(|c| (0..m.nrows()).map(|r| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Smallest pivot magnitude of `U`, relative to the largest.
pub(crate) fn relative_min_pivot(lu: &PartialPivLu<c64>) -> f64 {
    let u = lu.U();
    let n = u.nrows().min(u.ncols());
    let mags: Vec<f64> = (0..n).map(|i| u[(i, i)].norm()).collect();
    let hi = mags.iter().copied().fold(0.0, f64::max);
    let lo = mags.iter().copied().fold(f64::INFINITY, f64::min);
    if hi == 0.0 || !hi.is_finite() {
        0.0
    } else {
        lo / hi
    }
}

/// Estimate of `||A||_1 ||A^{-1}||_1` from an LU factorization (Hager/Higham).
pub fn condition_estimate_1(a: MatRef<'_, c64>, lu: &PartialPivLu<c64>) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 1.0;
    }
    if relative_min_pivot(lu) == 0.0 {
        return f64::INFINITY;
    }
    let solve = |x: &Mat<c64>| lu.solve(x);
    let solve_adj = |x: &Mat<c64>| lu.solve_adjoint(x);
    let col_norm1 = |x: &Mat<c64>| (0..n).map(|i| x[(i, 0)].norm()).sum::<f64>();

    let mut x = Mat::<c64>::from_fn(n, 1, |_, _| c64::new(1.0 / n as f64, 0.0));
    let mut estimate = 0.0;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let y = solve(&x);
        estimate = col_norm1(&y);
        let sign = Mat::<c64>::from_fn(n, 1, |i, _| {
            let v = y[(i, 0)];
            if v.norm() == 0.0 {
                c64::new(1.0, 0.0)
            } else {
                v / v.norm()
            }
        });
        let z = solve_adj(&sign);
        let (j, zmax) = (0..n)
            .map(|i| (i, z[(i, 0)].norm()))
            .fold((0, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        let ztx: f64 = (0..n).map(|i| (z[(i, 0)].conj() * x[(i, 0)]).re).sum();
        if iter > 0 && (zmax <= ztx || j == last_j) {
            break;
        }
        last_j = j;
        x = Mat::<c64>::zeros(n, 1);
        x[(j, 0)] = c64::new(1.0, 0.0);
    }
    // Alternating test vector guards against the known failure modes of the
    // gradient iteration.
    let alt = Mat::<c64>::from_fn(n, 1, |i, _| {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let ramp = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
        c64::new(sign * (1.0 + ramp), 0.0)
    });
    let alt_est = 2.0 * col_norm1(&solve(&alt)) / (3.0 * n as f64);
    let inv_norm = estimate.max(alt_est);
    let cond = norm1(a) * inv_norm;
    if cond.is_finite() {
        cond
    } else {
        f64::INFINITY
    }
}
