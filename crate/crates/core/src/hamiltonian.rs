//! Periodic nearest-neighbour spin-chain Hamiltonians.
//!
//! Three families are provided:
//!
//! * [`Family::TiltedIsing`]: `sum_j g X_j + h Z_j + J Z_j Z_{j+1}` in Pauli
//!   matrices (`X = 2 S^x`), spin 1/2 only.
//! * [`Family::XyFields`]: `sum_j Jx S^x_j S^x_{j+1} + Jy S^y_j S^y_{j+1} + hx S^x_j + hy S^y_j`
//!   in spin operators, any spin.
//! * [`Family::Generic`]: XYZ couplings plus a uniform field, in spin operators.
//!
//! The bond sum always runs over `j = 1..=L` with site `L + 1` wrapped to 1,
//! so a two-site ring counts its single bond twice.

use faer::Mat;
use num_complex::Complex64 as c64;

use crate::error::{AcrError, Result};
use crate::hilbert::{add_pair_term, add_site_term, local_spin_operators, ChainGeometry, DenseOperator, Spin};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedIsing {
    pub g: f64,
    pub h: f64,
    pub j: f64,
}

impl TiltedIsing {
    /// Couplings of the strongly chaotic reference point.
    pub const REFERENCE: TiltedIsing = TiltedIsing {
        g: 0.9045,
        h: 0.8090,
        j: 1.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyFields {
    pub jx: f64,
    pub jy: f64,
    pub hx: f64,
    pub hy: f64,
}

impl XyFields {
    pub const REFERENCE: XyFields = XyFields {
        jx: -2.0,
        jy: -4.0,
        hx: 2.2,
        hy: 2.2,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NearestNeighbor {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    TiltedIsing(TiltedIsing),
    XyFields(XyFields),
    Generic(NearestNeighbor),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub geom: ChainGeometry,
    pub family: Family,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(geom: ChainGeometry, family: Family) -> Result<Self> {
        if geom.sites() < 2 {
            return Err(AcrError::InvalidGeometry("a ring needs at least two sites".into()));
        }
        if matches!(family, Family::TiltedIsing(_)) && geom.spin() != Spin::HALF {
            return Err(AcrError::Unsupported(format!(
                "the Pauli tilted-field Ising chain is defined for spin 1/2 only, got S = {}",
                geom.spin()
            )));
        }
        Ok(Self {
            geom,
            family,
            boundary: Boundary::Periodic,
        })
    }

    pub fn tilted_ising(sites: usize, params: TiltedIsing) -> Result<Self> {
        Self::new(ChainGeometry::spin_half(sites)?, Family::TiltedIsing(params))
    }

    pub fn xy_fields(sites: usize, spin: Spin, params: XyFields) -> Result<Self> {
        Self::new(ChainGeometry::new(sites, spin)?, Family::XyFields(params))
    }

    fn bonds(&self) -> impl Iterator<Item = (usize, usize)> {
        let l = self.geom.sites();
        (1..=l).map(move |j| (j, j % l + 1))
    }
}

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

/// Pauli tilted-field Ising ring.
pub fn build_h1(spec: &ChainSpec) -> Result<DenseOperator> {
    let Family::TiltedIsing(p) = spec.family else {
        return Err(AcrError::Unsupported("build_h1 needs the tilted Ising family".into()));
    };
    let geom = spec.geom;
    if geom.spin() != Spin::HALF {
        return Err(AcrError::Unsupported("tilted Ising requires spin 1/2".into()));
    }
    let ops = local_spin_operators(Spin::HALF);
    let x = Mat::from_fn(2, 2, |r, c| ops.sx[(r, c)] * 2.0);
    let z = Mat::from_fn(2, 2, |r, c| ops.sz[(r, c)] * 2.0);
    let mut h = Mat::<c64>::zeros(geom.dim(), geom.dim());
    for site in 1..=geom.sites() {
        add_site_term(&mut h, &geom, re(p.g), x.as_ref(), site);
        add_site_term(&mut h, &geom, re(p.h), z.as_ref(), site);
    }
    for (a, b) in spec.bonds() {
        add_pair_term(&mut h, &geom, re(p.j), (z.as_ref(), a), (z.as_ref(), b));
    }
    DenseOperator::hermitian(h)
}

/// XY ring with in-plane fields, in spin (not Pauli) operators.
pub fn build_h2(spec: &ChainSpec) -> Result<DenseOperator> {
    let Family::XyFields(p) = spec.family else {
        return Err(AcrError::Unsupported("build_h2 needs the XY-with-fields family".into()));
    };
    build_spin_chain(
        spec,
        NearestNeighbor {
            jx: p.jx,
            jy: p.jy,
            jz: 0.0,
            hx: p.hx,
            hy: p.hy,
            hz: 0.0,
        },
    )
}

pub fn build_generic(spec: &ChainSpec) -> Result<DenseOperator> {
    let Family::Generic(p) = spec.family else {
        return Err(AcrError::Unsupported("build_generic needs the generic family".into()));
    };
    build_spin_chain(spec, p)
}

fn build_spin_chain(spec: &ChainSpec, p: NearestNeighbor) -> Result<DenseOperator> {
    let geom = spec.geom;
    let ops = local_spin_operators(geom.spin());
    let mut h = Mat::<c64>::zeros(geom.dim(), geom.dim());
    let fields = [(p.hx, &ops.sx), (p.hy, &ops.sy), (p.hz, &ops.sz)];
    let couplings = [(p.jx, &ops.sx), (p.jy, &ops.sy), (p.jz, &ops.sz)];
    for site in 1..=geom.sites() {
        for (coeff, op) in fields {
            if coeff != 0.0 {
                add_site_term(&mut h, &geom, re(coeff), op.as_ref(), site);
            }
        }
    }
    for (a, b) in spec.bonds() {
        for (coeff, op) in couplings {
            if coeff != 0.0 {
                add_pair_term(&mut h, &geom, re(coeff), (op.as_ref(), a), (op.as_ref(), b));
            }
        }
    }
    DenseOperator::hermitian(h)
}

pub fn build_hamiltonian(spec: &ChainSpec) -> Result<DenseOperator> {
    match spec.family {
        Family::TiltedIsing(_) => build_h1(spec),
        Family::XyFields(_) => build_h2(spec),
        Family::Generic(_) => build_generic(spec),
    }
}
