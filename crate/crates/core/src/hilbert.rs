//! Basis conventions for chains of `L` sites with local dimension `g = 2S + 1`.
//!
//! Local levels are labelled `m = 0..g`, with `m = g - 1` the highest-weight
//! state (`S^z = +S`) and `m = 0` the lowest. Many-body basis vectors are
//! numbered from 1 in the order
//!
//! ```text
//! j = 1 + sum_i (g - 1 - m_i) * g^(L - i)
//! ```
//!
//! so site 1 is the most significant digit and `j = 1` is the all-highest-weight
//! vector (`|1 1 ... 1>` for spin 1/2). Local matrices use the same order: row
//! and column `r` correspond to `m = g - 1 - r`.

use faer::Mat;
use num_complex::Complex64 as c64;

use crate::error::{AcrError, Result};

/// Largest Hilbert-space dimension accepted anywhere in the crate.
pub const MAX_DIM: usize = 1 << 14;

/// Half-integer spin magnitude stored as `2S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub const HALF: Spin = Spin(1);

    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(AcrError::InvalidSpin(0.0));
        }
        Ok(Spin(twice))
    }

    pub fn new(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if !twice.is_finite() || twice < 1.0 || (twice - twice.round()).abs() > 1e-12 {
            return Err(AcrError::InvalidSpin(s));
        }
        Ok(Spin(twice.round() as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Local Hilbert-space dimension `2S + 1`.
    pub fn local_dim(self) -> usize {
        self.0 as usize + 1
    }
}

impl std::fmt::Display for Spin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Number of sites and spin magnitude of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainGeometry {
    sites: usize,
    spin: Spin,
    dim: usize,
}

impl ChainGeometry {
    pub fn new(sites: usize, spin: Spin) -> Result<Self> {
        if sites == 0 {
            return Err(AcrError::InvalidGeometry("chain needs at least one site".into()));
        }
        let g = spin.local_dim();
        let mut dim: usize = 1;
        for _ in 0..sites {
            dim = dim.checked_mul(g).filter(|&d| d <= MAX_DIM).ok_or_else(|| {
                AcrError::InvalidGeometry(format!("dimension {g}^{sites} exceeds the dense limit {MAX_DIM}"))
            })?;
        }
        Ok(Self { sites, spin, dim })
    }

    pub fn spin_half(sites: usize) -> Result<Self> {
        Self::new(sites, Spin::HALF)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn local_dim(&self) -> usize {
        self.spin.local_dim()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Place value `g^(L - site)` of a 1-based site in a 0-based basis offset.
    pub fn stride(&self, site: usize) -> usize {
        self.local_dim().pow((self.sites - site) as u32)
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.sites {
            return Err(AcrError::SiteOutOfRange {
                site,
                sites: self.sites,
            });
        }
        Ok(())
    }
}

/// A many-body basis vector: its 1-based position and per-site levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisIndex {
    pub j: usize,
    pub levels: Vec<usize>,
}

impl BasisIndex {
    /// 0-based storage offset.
    pub fn offset(&self) -> usize {
        self.j - 1
    }
}

pub fn encode_index(levels: &[usize], geom: &ChainGeometry) -> Result<BasisIndex> {
    if levels.len() != geom.sites() {
        return Err(AcrError::WrongLength {
            got: levels.len(),
            expected: geom.sites(),
        });
    }
    let g = geom.local_dim();
    let mut offset = 0;
    for (i, &m) in levels.iter().enumerate() {
        if m >= g {
            return Err(AcrError::LevelOutOfRange {
                site: i + 1,
                level: m,
                local_dim: g,
            });
        }
        offset = offset * g + (g - 1 - m);
    }
    Ok(BasisIndex {
        j: offset + 1,
        levels: levels.to_vec(),
    })
}

pub fn decode_index(j: usize, geom: &ChainGeometry) -> Result<BasisIndex> {
    if j == 0 || j > geom.dim() {
        return Err(AcrError::IndexOutOfRange {
            index: j,
            dim: geom.dim(),
        });
    }
    let g = geom.local_dim();
    let mut rest = j - 1;
    let mut levels = vec![0; geom.sites()];
    for slot in levels.iter_mut().rev() {
        *slot = g - 1 - rest % g;
        rest /= g;
    }
    Ok(BasisIndex { j, levels })
}

/// Local spin matrices in the highest-weight-first order.
#[derive(Debug, Clone)]
pub struct LocalSpinOperators {
    pub spin: Spin,
    pub sx: Mat<c64>,
    pub sy: Mat<c64>,
    pub sz: Mat<c64>,
    pub splus: Mat<c64>,
    pub sminus: Mat<c64>,
}

pub fn local_spin_operators(spin: Spin) -> LocalSpinOperators {
    let g = spin.local_dim();
    let s = spin.value();
    let m_of = |r: usize| s - r as f64;
    let mut splus = Mat::<c64>::zeros(g, g);
    for r in 1..g {
        let m = m_of(r);
        splus[(r - 1, r)] = c64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let sminus = splus.adjoint().to_owned();
    let sz = Mat::<c64>::from_fn(g, g, |r, c| {
        if r == c {
            c64::new(m_of(r), 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let sx = Mat::<c64>::from_fn(g, g, |r, c| (splus[(r, c)] + sminus[(r, c)]) * 0.5);
    let sy = Mat::<c64>::from_fn(g, g, |r, c| (splus[(r, c)] - sminus[(r, c)]) * c64::new(0.0, -0.5));
    LocalSpinOperators {
        spin,
        sx,
        sy,
        sz,
        splus,
        sminus,
    }
}

/// A dense square complex matrix with an optional Hermiticity certificate.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: Mat<c64>,
    hermitian: bool,
}

impl DenseOperator {
    pub fn new(matrix: Mat<c64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(AcrError::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        Ok(Self {
            matrix,
            hermitian: false,
        })
    }

    /// Wraps `matrix`, verifying `max |M - M^dagger| < 1e-12 * max(1, max |M|)`.
    pub fn hermitian(matrix: Mat<c64>) -> Result<Self> {
        let mut op = Self::new(matrix)?;
        let scale = crate::linalg::max_abs(op.matrix.as_ref()).max(1.0);
        let residual = hermiticity_residual(op.matrix.as_ref());
        if residual >= 1e-12 * scale || !residual.is_finite() {
            return Err(AcrError::NotHermitian(residual));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn matrix(&self) -> &Mat<c64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn apply(&self, v: &[c64]) -> Vec<c64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length must match operator dimension");
        let m = &self.matrix;
        let mut out = vec![c64::new(0.0, 0.0); n];
        for (c, &vc) in v.iter().enumerate() {
            if vc == c64::new(0.0, 0.0) {
                continue;
            }
            let col = m.col(c);
            for (r, o) in out.iter_mut().enumerate() {
                *o += col[r] * vc;
            }
        }
        out
    }
}

pub fn hermiticity_residual(m: faer::MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for c in 0..n {
        for r in c..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Adds `coeff * op_site` to `target` without forming the tensor product.
pub(crate) fn add_site_term(
    target: &mut Mat<c64>,
    geom: &ChainGeometry,
    coeff: c64,
    op: faer::MatRef<'_, c64>,
    site: usize,
) {
    let g = geom.local_dim();
    let stride = geom.stride(site);
    let block = stride * g;
    let entries = nonzeros(op);
    for hi in (0..geom.dim()).step_by(block) {
        for lo in 0..stride {
            let base = hi + lo;
            for &(r, c, v) in &entries {
                target[(base + r * stride, base + c * stride)] += coeff * v;
            }
        }
    }
}

/// Adds `coeff * (op_a at site_a) (op_b at site_b)` for distinct sites.
pub(crate) fn add_pair_term(
    target: &mut Mat<c64>,
    geom: &ChainGeometry,
    coeff: c64,
    (op_a, site_a): (faer::MatRef<'_, c64>, usize),
    (op_b, site_b): (faer::MatRef<'_, c64>, usize),
) {
    debug_assert_ne!(site_a, site_b);
    let g = geom.local_dim();
    let (sa, sb) = (geom.stride(site_a), geom.stride(site_b));
    let ea = nonzeros(op_a);
    let eb = nonzeros(op_b);
    for col in 0..geom.dim() {
        let la = (col / sa) % g;
        let lb = (col / sb) % g;
        let rest = col - la * sa - lb * sb;
        for &(ra, _, va) in ea.iter().filter(|e| e.1 == la) {
            for &(rb, _, vb) in eb.iter().filter(|e| e.1 == lb) {
                let row = rest + ra * sa + rb * sb;
                target[(row, col)] += coeff * va * vb;
            }
        }
    }
}

fn nonzeros(op: faer::MatRef<'_, c64>) -> Vec<(usize, usize, c64)> {
    let mut out = Vec::new();
    for c in 0..op.ncols() {
        for r in 0..op.nrows() {
            let v = op[(r, c)];
            if v != c64::new(0.0, 0.0) {
                out.push((r, c, v));
            }
        }
    }
    out
}

/// `I ⊗ ... ⊗ op ⊗ ... ⊗ I` with `op` on the 1-based `site`.
pub fn embed_site_operator(op: faer::MatRef<'_, c64>, site: usize, geom: &ChainGeometry) -> Result<DenseOperator> {
    geom.check_site(site)?;
    let g = geom.local_dim();
    if op.nrows() != g || op.ncols() != g {
        return Err(AcrError::DimensionMismatch {
            expected: g,
            got: op.nrows(),
        });
    }
    let mut m = Mat::<c64>::zeros(geom.dim(), geom.dim());
    add_site_term(&mut m, geom, c64::new(1.0, 0.0), op, site);
    DenseOperator::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutator(a: &Mat<c64>, b: &Mat<c64>) -> Mat<c64> {
        a * b - b * a
    }

    fn max_diff(a: faer::MatRef<'_, c64>, b: faer::MatRef<'_, c64>) -> f64 {
        let mut w: f64 = 0.0;
        for c in 0..a.ncols() {
            for r in 0..a.nrows() {
                w = w.max((a[(r, c)] - b[(r, c)]).norm());
            }
        }
        w
    }

    #[test]
    fn encode_examples() {
        let g3 = ChainGeometry::spin_half(3).unwrap();
        assert_eq!(encode_index(&[1, 1, 1], &g3).unwrap().j, 1);
        assert_eq!(encode_index(&[0, 0, 0], &g3).unwrap().j, 8);
        assert_eq!(encode_index(&[1, 0, 1], &g3).unwrap().j, 3);
        let s1 = ChainGeometry::new(2, Spin::new(1.0).unwrap()).unwrap();
        assert_eq!(encode_index(&[0, 0], &s1).unwrap().j, 9);
    }

    #[test]
    fn encode_rejects_bad_input() {
        let g3 = ChainGeometry::spin_half(3).unwrap();
        assert!(matches!(
            encode_index(&[1, 1], &g3),
            Err(AcrError::WrongLength { got: 2, expected: 3 })
        ));
        assert!(matches!(
            encode_index(&[1, 2, 1], &g3),
            Err(AcrError::LevelOutOfRange { site: 2, .. })
        ));
        assert!(decode_index(0, &g3).is_err());
        assert!(decode_index(9, &g3).is_err());
    }

    #[test]
    fn round_trip_exhaustive() {
        for twice in 1..=4u32 {
            let spin = Spin::from_twice(twice).unwrap();
            for sites in 1..=8 {
                let Ok(geom) = ChainGeometry::new(sites, spin) else {
                    continue;
                };
                if geom.dim() > 1 << 12 {
                    continue;
                }
                for j in 1..=geom.dim() {
                    let b = decode_index(j, &geom).unwrap();
                    assert_eq!(encode_index(&b.levels, &geom).unwrap().j, j);
                }
            }
        }
    }

    #[test]
    fn spin_parsing() {
        assert_eq!(Spin::new(0.5).unwrap(), Spin::HALF);
        assert_eq!(Spin::new(1.5).unwrap().local_dim(), 4);
        assert!(Spin::new(0.0).is_err());
        assert!(Spin::new(0.3).is_err());
        assert_eq!(Spin::new(1.5).unwrap().to_string(), "3/2");
        assert_eq!(Spin::new(2.0).unwrap().to_string(), "2");
    }

    #[test]
    fn geometry_limits() {
        assert!(ChainGeometry::spin_half(0).is_err());
        assert!(ChainGeometry::spin_half(15).is_err());
        assert_eq!(ChainGeometry::spin_half(12).unwrap().dim(), 4096);
    }

    #[test]
    fn spin_half_operators_are_half_paulis() {
        let ops = local_spin_operators(Spin::HALF);
        let h = 0.5;
        assert_eq!(ops.sz[(0, 0)], c64::new(h, 0.0));
        assert_eq!(ops.sz[(1, 1)], c64::new(-h, 0.0));
        assert_eq!(ops.sx[(0, 1)], c64::new(h, 0.0));
        assert_eq!(ops.sx[(1, 0)], c64::new(h, 0.0));
        assert_eq!(ops.sy[(0, 1)], c64::new(0.0, -h));
        assert_eq!(ops.sy[(1, 0)], c64::new(0.0, h));
    }

    #[test]
    fn spin_one_sz() {
        let ops = local_spin_operators(Spin::new(1.0).unwrap());
        let diag: Vec<f64> = (0..3).map(|r| ops.sz[(r, r)].re).collect();
        assert_eq!(diag, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn angular_momentum_algebra() {
        let i = c64::new(0.0, 1.0);
        for twice in 1..=4 {
            let ops = local_spin_operators(Spin::from_twice(twice).unwrap());
            let checks = [
                (commutator(&ops.sx, &ops.sy), &ops.sz),
                (commutator(&ops.sy, &ops.sz), &ops.sx),
                (commutator(&ops.sz, &ops.sx), &ops.sy),
            ];
            for (lhs, rhs) in checks {
                let scaled = Mat::<c64>::from_fn(rhs.nrows(), rhs.ncols(), |r, c| rhs[(r, c)] * i);
                assert!(max_diff(lhs.as_ref(), scaled.as_ref()) < 1e-12);
            }
            let s = ops.spin.value();
            let casimir = &ops.sx * &ops.sx + &ops.sy * &ops.sy + &ops.sz * &ops.sz;
            let expect = Mat::<c64>::from_fn(casimir.nrows(), casimir.ncols(), |r, c| {
                if r == c {
                    c64::new(s * (s + 1.0), 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            });
            assert!(max_diff(casimir.as_ref(), expect.as_ref()) < 1e-12);
        }
    }

    #[test]
    fn embed_trivial_and_eigenvalue() {
        let ops = local_spin_operators(Spin::HALF);
        let g1 = ChainGeometry::spin_half(1).unwrap();
        let e = embed_site_operator(ops.sz.as_ref(), 1, &g1).unwrap();
        assert!(max_diff(e.matrix().as_ref(), ops.sz.as_ref()) < 1e-15);

        let g2 = ChainGeometry::spin_half(2).unwrap();
        let e = embed_site_operator(ops.sz.as_ref(), 1, &g2).unwrap();
        assert_eq!(e.matrix()[(0, 0)], c64::new(0.5, 0.0));
    }

    #[test]
    fn embed_sx_on_middle_site() {
        let ops = local_spin_operators(Spin::HALF);
        let g3 = ChainGeometry::spin_half(3).unwrap();
        let e = embed_site_operator(ops.sx.as_ref(), 2, &g3).unwrap();
        let mut v = vec![c64::new(0.0, 0.0); 8];
        v[0] = c64::new(1.0, 0.0);
        let out = e.apply(&v);
        for (k, a) in out.iter().enumerate() {
            let expect = if k == 2 { 0.5 } else { 0.0 };
            assert!((a - c64::new(expect, 0.0)).norm() < 1e-15, "k={k}");
        }
        assert!(embed_site_operator(ops.sx.as_ref(), 4, &g3).is_err());
        assert!(embed_site_operator(ops.sx.as_ref(), 0, &g3).is_err());
    }

    #[test]
    fn embedded_operators_commute_across_sites() {
        for twice in 1..=2 {
            let ops = local_spin_operators(Spin::from_twice(twice).unwrap());
            let max_sites = if twice == 1 { 4 } else { 3 };
            for sites in 2..=max_sites {
                let geom = ChainGeometry::new(sites, ops.spin).unwrap();
                for i in 1..=sites {
                    for j in 1..=sites {
                        if i == j {
                            continue;
                        }
                        let a = embed_site_operator(ops.sx.as_ref(), i, &geom).unwrap();
                        let b = embed_site_operator(ops.sy.as_ref(), j, &geom).unwrap();
                        let c = commutator(a.matrix(), b.matrix());
                        assert!(crate::linalg::max_abs(c.as_ref()) < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn pair_term_matches_product_of_embeddings() {
        let ops = local_spin_operators(Spin::new(1.0).unwrap());
        let geom = ChainGeometry::new(3, ops.spin).unwrap();
        let a = embed_site_operator(ops.sx.as_ref(), 1, &geom).unwrap();
        let b = embed_site_operator(ops.sy.as_ref(), 3, &geom).unwrap();
        let expect = a.matrix() * b.matrix();
        let mut got = Mat::<c64>::zeros(geom.dim(), geom.dim());
        add_pair_term(
            &mut got,
            &geom,
            c64::new(1.0, 0.0),
            (ops.sx.as_ref(), 1),
            (ops.sy.as_ref(), 3),
        );
        assert!(max_diff(got.as_ref(), expect.as_ref()) < 1e-14);
    }

    #[test]
    fn hermitian_wrapper_rejects_asymmetric() {
        let mut m = Mat::<c64>::zeros(2, 2);
        m[(0, 1)] = c64::new(1.0, 0.0);
        assert!(matches!(DenseOperator::hermitian(m), Err(AcrError::NotHermitian(_))));
    }
}
