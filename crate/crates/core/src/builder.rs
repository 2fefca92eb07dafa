//! Construction of almost-complete-revival (ACR) initial states.
//!
//! For spin 1/2 the initial state is a product of a chosen pure state on the
//! collapse site `q` with a free reservoir state on the remaining sites:
//!
//! ```text
//! psi0 = sum_k A_k ( c_up |d[k]> + c_down |d[k] + 2^(L-q)> )
//! ```
//!
//! where `d[k]` runs over the basis vectors with site `q` in `|1>` and the
//! partner index flips only site `q`. Demanding that `u psi0` factorizes on
//! the revival site `p` with site state `r_up |1> + r_down |0>` gives one
//! linear condition per pair `(d_bar[i], d_bar[i] + 2^(L-p))`:
//!
//! ```text
//! r_up (u psi0)[d_bar[i] + 2^(L-p)] - r_down (u psi0)[d_bar[i]] = 0
//! ```
//!
//! These `2^(L-1)` conditions in `2^(L-1)` unknowns form the matrix `V`.
//! Generic chaotic dynamics makes `V` nonsingular, so one condition is
//! relaxed to `(V A)_0 = delta` and the rest are solved exactly.
//!
//! Single-site states are [`BlochPoint`]s. The complex parameter `alpha`
//! describes the site state `|0> + conj(alpha) |1>` (normalized), for which
//! `<S^x> = Re(alpha) / (1 + |alpha|^2)`, `<S^y> = Im(alpha) / (1 + |alpha|^2)`
//! and `<S^z> = -(1 - |alpha|^2) / (2 (1 + |alpha|^2))`; `alpha = 0` is `|0>`
//! and the infinite limit is `|1>`.

use faer::linalg::solvers::Solve;
use faer::{Mat, MatRef};
use num_complex::Complex64 as c64;

use crate::error::{AcrError, Result};
use crate::hamiltonian::ChainSpec;
use crate::hilbert::{ChainGeometry, DenseOperator, Spin};
use crate::linalg::{condition_estimate_1, relative_min_pivot};
use crate::propagator::{Propagator, StateVector};
use crate::spectral::SpectralDecomposition;

/// Condition-number estimate above which `V` is treated as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
const ONE: c64 = c64 { re: 1.0, im: 0.0 };

/// Projective parameter of a spin-1/2 pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlochParameter {
    Finite(c64),
    Infinite,
}

/// A pure spin-1/2 state `up |1> + down |0>`, normalized, with the
/// larger-magnitude amplitude real and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    up: c64,
    down: c64,
}

impl BlochPoint {
    pub const UP: BlochPoint = BlochPoint { up: ONE, down: ZERO };
    pub const DOWN: BlochPoint = BlochPoint { up: ZERO, down: ONE };

    pub fn from_ket(up: c64, down: c64) -> Result<Self> {
        let n = (up.norm_sqr() + down.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(AcrError::InvalidProblem(
                "Bloch point needs a nonzero finite ket".into(),
            ));
        }
        let up_leads = up.norm() >= down.norm();
        let lead = if up_leads { up } else { down };
        let phase = lead.conj() / lead.norm();
        let real_lead = c64::new(lead.norm() / n, 0.0);
        Ok(if up_leads {
            Self {
                up: real_lead,
                down: down * phase / n,
            }
        } else {
            Self {
                up: up * phase / n,
                down: real_lead,
            }
        })
    }

    /// Pure state with the given Bloch vector direction; length is ignored.
    pub fn from_direction(v: [f64; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r == 0.0 || !r.is_finite() {
            return Err(AcrError::InvalidProblem("Bloch direction must be nonzero".into()));
        }
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        let phi = v[1].atan2(v[0]);
        Self::from_ket(
            c64::new((theta / 2.0).cos(), 0.0),
            c64::from_polar((theta / 2.0).sin(), phi),
        )
    }

    pub fn up(&self) -> c64 {
        self.up
    }

    pub fn down(&self) -> c64 {
        self.down
    }

    pub fn alpha(&self) -> BlochParameter {
        if self.down == ZERO {
            BlochParameter::Infinite
        } else {
            BlochParameter::Finite((self.up / self.down).conj())
        }
    }

    /// `(<S^x>, <S^y>, <S^z>)`.
    pub fn spin_vector(&self) -> [f64; 3] {
        let cross = self.up.conj() * self.down;
        [cross.re, cross.im, 0.5 * (self.up.norm_sqr() - self.down.norm_sqr())]
    }

    /// The state orthogonal to `self`.
    pub fn antipode(&self) -> BlochPoint {
        BlochPoint::from_ket(-self.down.conj(), self.up.conj()).expect("nonzero")
    }
}

pub fn bloch_from_alpha(alpha: BlochParameter) -> BlochPoint {
    match alpha {
        BlochParameter::Infinite => BlochPoint::UP,
        BlochParameter::Finite(a) => BlochPoint::from_ket(a.conj(), ONE).expect("nonzero ket"),
    }
}

/// Paired basis indices (1-based) of the collapse and revival sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPairSets {
    pub d: Vec<usize>,
    pub d_bar: Vec<usize>,
    pub offset_q: usize,
    pub offset_p: usize,
}

/// `s(k, n) = 2^(L-site+1) (k - 1) + n`, listed with `k` innermost.
fn pair_bases(sites: usize, site: usize) -> Vec<usize> {
    let inner = 1usize << (site - 1);
    let outer = 1usize << (sites - site);
    let step = 1usize << (sites - site + 1);
    let mut out = Vec::with_capacity(inner * outer);
    for n in 1..=outer {
        for k in 1..=inner {
            out.push(step * (k - 1) + n);
        }
    }
    out
}

pub fn index_pair_sets(sites: usize, q: usize, p: usize) -> Result<IndexPairSets> {
    if sites == 0 || sites > 30 {
        return Err(AcrError::InvalidGeometry(format!("unsupported chain length {sites}")));
    }
    for site in [q, p] {
        if site == 0 || site > sites {
            return Err(AcrError::SiteOutOfRange { site, sites });
        }
    }
    Ok(IndexPairSets {
        d: pair_bases(sites, q),
        d_bar: pair_bases(sites, p),
        offset_q: 1 << (sites - q),
        offset_p: 1 << (sites - p),
    })
}

/// The revival constraint matrix, rows indexed by `d_bar`, columns by `d`.
pub fn build_v_matrix(
    u: MatRef<'_, c64>,
    sets: &IndexPairSets,
    collapse: &BlochPoint,
    revival: &BlochPoint,
) -> Result<Mat<c64>> {
    let half = sets.d.len();
    if sets.d_bar.len() != half {
        return Err(AcrError::DimensionMismatch {
            expected: half,
            got: sets.d_bar.len(),
        });
    }
    if u.nrows() != 2 * half || u.ncols() != 2 * half {
        return Err(AcrError::DimensionMismatch {
            expected: 2 * half,
            got: u.nrows(),
        });
    }
    let (cu, cd) = (collapse.up(), collapse.down());
    let (ru, rd) = (revival.up(), revival.down());
    let (oq, op) = (sets.offset_q, sets.offset_p);
    Ok(Mat::from_fn(half, half, |i, k| {
        let top = sets.d_bar[i] - 1;
        let bottom = top + op;
        let left = sets.d[k] - 1;
        let right = left + oq;
        let lower = cu * u[(bottom, left)] + cd * u[(bottom, right)];
        let upper = cu * u[(top, left)] + cd * u[(top, right)];
        ru * lower - rd * upper
    }))
}

/// An ACR construction request for a spin-1/2 chain.
#[derive(Debug, Clone, PartialEq)]
pub struct AcrProblem {
    pub spec: ChainSpec,
    pub q: usize,
    pub p: usize,
    pub collapse: BlochPoint,
    pub revival: BlochPoint,
    pub tau: f64,
    /// 0-based row of `V` carrying the nonzero right-hand side.
    pub relaxed_row: usize,
}

impl AcrProblem {
    pub fn new(
        spec: ChainSpec,
        q: usize,
        collapse: BlochPoint,
        p: usize,
        revival: BlochPoint,
        tau: f64,
    ) -> Result<Self> {
        let problem = Self {
            spec,
            q,
            p,
            collapse,
            revival,
            tau,
            relaxed_row: 0,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        let geom = self.spec.geom;
        if geom.spin() != Spin::HALF {
            return Err(AcrError::Unsupported(
                "site-resolved Bloch revivals are built for spin 1/2; use the higher-spin path".into(),
            ));
        }
        geom.check_site(self.q)?;
        geom.check_site(self.p)?;
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(AcrError::InvalidProblem(format!(
                "revival time must be positive, got {}",
                self.tau
            )));
        }
        if self.relaxed_row >= geom.dim() / 2 {
            return Err(AcrError::InvalidProblem(format!(
                "relaxed row {} out of range",
                self.relaxed_row
            )));
        }
        Ok(())
    }
}

/// Solved ACR state.
#[derive(Debug, Clone)]
pub struct AcrSolution {
    /// Free reservoir coefficients, scaled consistently with `psi0`.
    pub amplitudes: Vec<c64>,
    pub psi0: StateVector,
    /// Right-hand side of the relaxed condition after normalization.
    pub delta: c64,
    /// Largest homogeneous-condition violation relative to `|delta|`.
    pub residual: f64,
    pub condition: f64,
}

struct ConstraintSolution {
    amplitudes: Vec<c64>,
    delta: c64,
    residual: f64,
    condition: f64,
}

/// Solves `V A = e_row` and rescales so that `||A|| = 1`.
fn solve_relaxed(v: &Mat<c64>, row: usize) -> Result<ConstraintSolution> {
    let n = v.nrows();
    let lu = v.partial_piv_lu();
    if relative_min_pivot(&lu) == 0.0 {
        return Err(AcrError::DegenerateDynamics {
            condition: f64::INFINITY,
        });
    }
    let condition = condition_estimate_1(v.as_ref(), &lu);
    if condition > CONDITION_LIMIT || !condition.is_finite() {
        return Err(AcrError::DegenerateDynamics { condition });
    }
    let mut rhs = Mat::<c64>::zeros(n, 1);
    rhs[(row, 0)] = ONE;
    let sol = lu.solve(&rhs);
    let norm = (0..n).map(|i| sol[(i, 0)].norm_sqr()).sum::<f64>().sqrt();
    let amplitudes: Vec<c64> = (0..n).map(|i| sol[(i, 0)] / norm).collect();
    let image = v.as_ref() * faer::ColRef::from_slice(&amplitudes);
    let delta = image[row];
    let worst = (0..n)
        .filter(|&i| i != row)
        .map(|i| image[i].norm())
        .fold(0.0, f64::max);
    Ok(ConstraintSolution {
        amplitudes,
        delta,
        residual: worst / delta.norm(),
        condition,
    })
}

pub fn solve_acr(problem: &AcrProblem, u: &DenseOperator) -> Result<AcrSolution> {
    problem.validate()?;
    let geom = problem.spec.geom;
    if u.dim() != geom.dim() {
        return Err(AcrError::DimensionMismatch {
            expected: geom.dim(),
            got: u.dim(),
        });
    }
    let sets = index_pair_sets(geom.sites(), problem.q, problem.p)?;
    let v = build_v_matrix(u.matrix().as_ref(), &sets, &problem.collapse, &problem.revival)?;
    let solved = solve_relaxed(&v, problem.relaxed_row)?;
    drop(v);
    let mut psi = vec![ZERO; geom.dim()];
    let (cu, cd) = (problem.collapse.up(), problem.collapse.down());
    for (k, &a) in solved.amplitudes.iter().enumerate() {
        let base = sets.d[k] - 1;
        psi[base] = cu * a;
        psi[base + sets.offset_q] = cd * a;
    }
    Ok(AcrSolution {
        amplitudes: solved.amplitudes,
        psi0: StateVector::from_amplitudes(psi),
        delta: solved.delta,
        residual: solved.residual,
        condition: solved.condition,
    })
}

/// Rows and columns (0-based) of the higher-spin revival block: the initial
/// state lives on site 1 in its highest-weight level, and the amplitudes on
/// the lowest-weight level of site 1 are cancelled at the revival time.
pub fn higher_spin_block_indices(geom: &ChainGeometry) -> (Vec<usize>, Vec<usize>) {
    let g = geom.local_dim();
    let block = geom.dim() / g;
    let rows = ((g - 1) * block..geom.dim()).collect();
    let cols = (0..block).collect();
    (rows, cols)
}

fn higher_spin_solution(geom: &ChainGeometry, block: Mat<c64>) -> Result<AcrSolution> {
    let solved = solve_relaxed(&block, 0)?;
    let mut psi = vec![ZERO; geom.dim()];
    psi[..solved.amplitudes.len()].copy_from_slice(&solved.amplitudes);
    Ok(AcrSolution {
        amplitudes: solved.amplitudes,
        psi0: StateVector::from_amplitudes(psi),
        delta: solved.delta,
        residual: solved.residual,
        condition: solved.condition,
    })
}

/// Highest-weight to highest-weight revival on site 1 for any spin.
pub fn solve_acr_higher_spin(geom: &ChainGeometry, u: &DenseOperator) -> Result<AcrSolution> {
    if u.dim() != geom.dim() {
        return Err(AcrError::DimensionMismatch {
            expected: geom.dim(),
            got: u.dim(),
        });
    }
    let (rows, cols) = higher_spin_block_indices(geom);
    let m = u.matrix();
    let block = Mat::from_fn(rows.len(), cols.len(), |i, k| m[(rows[i], cols[k])]);
    higher_spin_solution(geom, block)
}

/// As [`solve_acr_higher_spin`], forming only the needed block of `u(tau)`.
pub fn solve_acr_higher_spin_from_decomposition(
    geom: &ChainGeometry,
    decomp: &SpectralDecomposition,
    tau: f64,
) -> Result<AcrSolution> {
    if decomp.dim() != geom.dim() {
        return Err(AcrError::DimensionMismatch {
            expected: geom.dim(),
            got: decomp.dim(),
        });
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(AcrError::InvalidProblem(format!(
            "revival time must be positive, got {tau}"
        )));
    }
    let (rows, cols) = higher_spin_block_indices(geom);
    let block = Propagator::new(decomp, tau).block(&rows, &cols);
    higher_spin_solution(geom, block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{haar_unitary, seeded_rng};
    use crate::hamiltonian::{TiltedIsing, XyFields};
    use crate::hilbert::decode_index;
    use crate::observables::{reduced_density, spin_expectations};
    use rand::Rng;

    fn close3(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn bloch_points_from_alpha() {
        let i = bloch_from_alpha(BlochParameter::Finite(c64::new(0.0, 1.0)));
        assert!(close3(i.spin_vector(), [0.0, 0.5, 0.0], 1e-15));
        let zero = bloch_from_alpha(BlochParameter::Finite(ZERO));
        assert_eq!(zero, BlochPoint::DOWN);
        assert!(close3(zero.spin_vector(), [0.0, 0.0, -0.5], 1e-15));
        let inf = bloch_from_alpha(BlochParameter::Infinite);
        assert!(close3(inf.spin_vector(), [0.0, 0.0, 0.5], 1e-15));
        let beta = c64::new(-(2.0f64 / 9.0).sqrt(), -1.0 / 3.0);
        let b = bloch_from_alpha(BlochParameter::Finite(beta)).spin_vector();
        assert!((b[0] + 0.5f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((b[1] + 0.25).abs() < 1e-12);
        let norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        assert!((norm - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bloch_formulas_hold_for_random_alpha() {
        let mut rng = seeded_rng(17);
        for _ in 0..50 {
            let a = c64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let p = bloch_from_alpha(BlochParameter::Finite(a));
            let n = 1.0 + a.norm_sqr();
            let expect = [a.re / n, a.im / n, -0.5 * (1.0 - a.norm_sqr()) / n];
            assert!(close3(p.spin_vector(), expect, 1e-13));
            match p.alpha() {
                BlochParameter::Finite(back) => assert!((back - a).norm() < 1e-12),
                BlochParameter::Infinite => panic!("finite alpha expected"),
            }
            // phase convention
            let lead = if p.up().norm() >= p.down().norm() {
                p.up()
            } else {
                p.down()
            };
            assert!(lead.im == 0.0 && lead.re >= 0.0);
        }
    }

    #[test]
    fn bloch_direction_round_trip() {
        for v in [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0], [-0.3, 0.4, -0.2]] {
            let p = BlochPoint::from_direction(v).unwrap();
            let s = p.spin_vector();
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            assert!(close3(s, [0.5 * v[0] / r, 0.5 * v[1] / r, 0.5 * v[2] / r], 1e-12));
        }
        let a = BlochPoint::from_direction([0.2, -0.1, 0.7]).unwrap();
        let b = a.antipode();
        assert!((a.up().conj() * b.up() + a.down().conj() * b.down()).norm() < 1e-15);
    }

    #[test]
    fn index_sets_examples() {
        let s = index_pair_sets(3, 2, 2).unwrap();
        assert_eq!(s.d, vec![1, 5, 2, 6]);
        assert_eq!(s.offset_q, 2);
        let partners: Vec<usize> = s.d.iter().map(|x| x + s.offset_q).collect();
        assert_eq!(partners, vec![3, 7, 4, 8]);

        let s = index_pair_sets(5, 1, 5).unwrap();
        assert_eq!(s.d, (1..=16).collect::<Vec<_>>());
        assert_eq!(s.offset_q, 16);
        assert_eq!(s.d_bar[0], 1);
        assert_eq!(s.offset_p, 1);
        assert_eq!(s.d_bar[0] + s.offset_p, 2);

        assert!(index_pair_sets(3, 0, 1).is_err());
        assert!(index_pair_sets(3, 1, 4).is_err());
    }

    #[test]
    fn index_sets_partition_and_flip_single_site() {
        for sites in 1..=6 {
            let geom = ChainGeometry::spin_half(sites).unwrap();
            for q in 1..=sites {
                let s = index_pair_sets(sites, q, q).unwrap();
                let mut seen = vec![0u8; geom.dim()];
                for &base in &s.d {
                    let partner = base + s.offset_q;
                    seen[base - 1] += 1;
                    seen[partner - 1] += 1;
                    let a = decode_index(base, &geom).unwrap().levels;
                    let b = decode_index(partner, &geom).unwrap().levels;
                    assert_eq!(a[q - 1], 1);
                    assert_eq!(b[q - 1], 0);
                    for i in 0..sites {
                        if i != q - 1 {
                            assert_eq!(a[i], b[i]);
                        }
                    }
                }
                assert!(seen.iter().all(|&c| c == 1));
            }
        }
    }

    #[test]
    fn v_matrix_block_limit() {
        let u = haar_unitary(&mut seeded_rng(2), 16);
        for q in 1..=4 {
            let sets = index_pair_sets(4, q, q).unwrap();
            let v = build_v_matrix(u.as_ref(), &sets, &BlochPoint::UP, &BlochPoint::UP).unwrap();
            for i in 0..8 {
                for k in 0..8 {
                    assert_eq!(v[(i, k)], u[(sets.d_bar[i] - 1 + sets.offset_p, sets.d[k] - 1)]);
                }
            }
            if q == 1 {
                // bottom-left quadrant
                for i in 0..8 {
                    for k in 0..8 {
                        assert_eq!(v[(i, k)], u[(8 + i, k)]);
                    }
                }
            }
        }
    }

    #[test]
    fn v_matrix_vanishes_for_identity_dynamics() {
        let u = Mat::<c64>::identity(16, 16);
        let point = bloch_from_alpha(BlochParameter::Finite(c64::new(0.3, -1.2)));
        for q in 1..=4 {
            let sets = index_pair_sets(4, q, q).unwrap();
            let v = build_v_matrix(u.as_ref(), &sets, &point, &point).unwrap();
            assert!(crate::linalg::max_abs(v.as_ref()) < 1e-15);
        }
    }

    #[test]
    fn identity_dynamics_is_refused() {
        let spec = ChainSpec::tilted_ising(4, TiltedIsing::REFERENCE).unwrap();
        let point = bloch_from_alpha(BlochParameter::Finite(c64::new(0.0, 1.0)));
        let problem = AcrProblem::new(spec, 2, point, 2, point, 1.0).unwrap();
        let u = DenseOperator::new(Mat::<c64>::identity(16, 16)).unwrap();
        assert!(matches!(
            solve_acr(&problem, &u),
            Err(AcrError::DegenerateDynamics { .. })
        ));
    }

    /// Brute force: the homogeneous conditions written with projectors,
    /// `(|e><e| (x) <r_perp|_p) u psi0 = 0` for every environment
    /// configuration `e` except the one containing basis vector 1.
    #[test]
    fn solution_satisfies_projector_form_of_conditions() {
        let mut rng = seeded_rng(31);
        let sites = 3;
        let geom = ChainGeometry::spin_half(sites).unwrap();
        let spec = ChainSpec::tilted_ising(sites, TiltedIsing::REFERENCE).unwrap();
        for _ in 0..10 {
            let q = rng.random_range(1..=sites);
            let p = rng.random_range(1..=sites);
            let alpha = c64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let beta = c64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let problem = AcrProblem::new(
                spec,
                q,
                bloch_from_alpha(BlochParameter::Finite(alpha)),
                p,
                bloch_from_alpha(BlochParameter::Finite(beta)),
                1.0,
            )
            .unwrap();
            let u = DenseOperator::new(haar_unitary(&mut rng, 8)).unwrap();
            let sol = solve_acr(&problem, &u).unwrap();
            assert!((sol.psi0.norm() - 1.0).abs() < 1e-12);
            let psi_t = u.apply(sol.psi0.amplitudes());
            let perp = problem.revival.antipode();
            // amplitude of <perp|_p on each environment configuration
            let mut leaks = std::collections::BTreeMap::new();
            for j in 1..=geom.dim() {
                let levels = decode_index(j, &geom).unwrap().levels;
                let local = if levels[p - 1] == 1 { perp.up() } else { perp.down() };
                let mut env = levels.clone();
                env.remove(p - 1);
                *leaks.entry(env).or_insert(ZERO) += local.conj() * psi_t[j - 1];
            }
            let all_up = vec![1usize; sites - 1];
            for (env, amp) in &leaks {
                if *env == all_up {
                    assert!((amp.norm() - sol.delta.norm()).abs() < 1e-10);
                } else {
                    assert!(amp.norm() < 1e-10, "leak {amp} on {env:?}");
                }
            }
            let rho = reduced_density(&sol.psi0, q, &geom).unwrap();
            let e = spin_expectations(&rho, Spin::HALF);
            assert!((e.purity - 1.0).abs() < 1e-12);
            assert!(close3(e.vector(), problem.collapse.spin_vector(), 1e-10));
        }
    }

    #[test]
    fn higher_spin_reduces_to_spin_half_path() {
        let mut rng = seeded_rng(5);
        let geom = ChainGeometry::spin_half(4).unwrap();
        let spec = ChainSpec::xy_fields(4, Spin::HALF, XyFields::REFERENCE).unwrap();
        let u = DenseOperator::new(haar_unitary(&mut rng, 16)).unwrap();
        let problem = AcrProblem::new(spec, 1, BlochPoint::UP, 1, BlochPoint::UP, 5.0).unwrap();
        let a = solve_acr(&problem, &u).unwrap();
        let b = solve_acr_higher_spin(&geom, &u).unwrap();
        for (x, y) in a.psi0.amplitudes().iter().zip(b.psi0.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
        assert!((a.delta - b.delta).norm() < 1e-12);
    }

    #[test]
    fn higher_spin_zeroes_lowest_weight_block() {
        let mut rng = seeded_rng(6);
        let spin = Spin::new(1.0).unwrap();
        let geom = ChainGeometry::new(3, spin).unwrap();
        let u = DenseOperator::new(haar_unitary(&mut rng, 27)).unwrap();
        let sol = solve_acr_higher_spin(&geom, &u).unwrap();
        let psi_t = u.apply(sol.psi0.amplitudes());
        let tiny = psi_t.iter().filter(|a| a.norm() < 1e-10).count();
        assert_eq!(tiny, 8);
        assert!(psi_t[..19].iter().all(|a| a.norm() > 1e-10));
        assert!((psi_t[18].norm() - sol.delta.norm()).abs() < 1e-12);
    }

    #[test]
    fn problem_validation() {
        let spec = ChainSpec::tilted_ising(4, TiltedIsing::REFERENCE).unwrap();
        assert!(AcrProblem::new(spec, 5, BlochPoint::UP, 1, BlochPoint::UP, 1.0).is_err());
        assert!(AcrProblem::new(spec, 1, BlochPoint::UP, 1, BlochPoint::UP, 0.0).is_err());
        let s1 = ChainSpec::xy_fields(3, Spin::new(1.0).unwrap(), XyFields::REFERENCE).unwrap();
        assert!(matches!(
            AcrProblem::new(s1, 1, BlochPoint::UP, 1, BlochPoint::UP, 1.0),
            Err(AcrError::Unsupported(_))
        ));
    }
}
