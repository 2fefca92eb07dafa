//! Almost-complete revivals in quantum spin chains.
//!
//! Given a chain Hamiltonian, a collapse site with its initial single-site
//! state, a revival site with a target state, and a revival time `tau`, this
//! crate builds a many-body initial state that is a product state on the
//! collapse site at `t = 0` and (almost) a product state on the revival site
//! at `t = tau`, then verifies the revival by exact evolution.
//!
//! The modules follow the data flow: [`hilbert`] fixes the basis,
//! [`hamiltonian`] and [`spectral`] produce the spectrum, [`propagator`]
//! turns it into `exp(-i H t)`, [`builder`] solves the revival conditions
//! and [`observables`] measures the result.

pub mod builder;
pub mod ensembles;
pub mod error;
pub mod exec;
pub mod hamiltonian;
pub mod hilbert;
pub mod linalg;
pub mod observables;
pub mod pipeline;
pub mod propagator;
pub mod spectral;

pub use builder::{
    bloch_from_alpha, build_v_matrix, index_pair_sets, solve_acr, solve_acr_higher_spin,
    solve_acr_higher_spin_from_decomposition, AcrProblem, AcrSolution, BlochParameter, BlochPoint, IndexPairSets,
};
pub use error::{AcrError, Result};
pub use exec::Execution;
pub use hamiltonian::{
    build_h1, build_h2, build_hamiltonian, ChainSpec, Family, NearestNeighbor, TiltedIsing, XyFields,
};
pub use hilbert::{
    decode_index, embed_site_operator, encode_index, local_spin_operators, BasisIndex, ChainGeometry, DenseOperator,
    LocalSpinOperators, Spin,
};
pub use observables::{
    reduced_density, scan_time_series, spin_expectations, ReducedDensityMatrix, SpinExpectation, TimeSeries,
};
pub use pipeline::{run_higher_spin, run_revival, RevivalRun, StageTimings};
pub use propagator::{
    energy_series, evolve_on_grid, expectation, mpr, propagator_matrix, relative_energy_drift, ParticipationRatio,
    Propagator, StateVector,
};
pub use spectral::{level_spacing_ratio, spectral_decompose, SpectralDecomposition};

/// Complex scalar used throughout.
pub use num_complex::Complex64;
