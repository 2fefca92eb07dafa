//! End-to-end revival runs: Hamiltonian, spectrum, propagator, solve.

use std::time::Instant;

use crate::builder::{solve_acr, solve_acr_higher_spin_from_decomposition, AcrProblem, AcrSolution};
use crate::error::Result;
use crate::hamiltonian::{build_hamiltonian, ChainSpec};
use crate::hilbert::DenseOperator;
use crate::propagator::propagator_matrix;
use crate::spectral::{spectral_decompose, SpectralDecomposition};

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub hamiltonian: f64,
    pub decomposition: f64,
    pub propagator: f64,
    pub solve: f64,
}

#[derive(Debug, Clone)]
pub struct RevivalRun {
    pub hamiltonian: DenseOperator,
    pub decomposition: SpectralDecomposition,
    /// Full `u(tau)`; the higher-spin path only forms the block it needs.
    pub propagator: Option<DenseOperator>,
    pub solution: AcrSolution,
    pub timings: StageTimings,
}

fn timed<T>(slot: &mut f64, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot = start.elapsed().as_secs_f64();
    out
}

pub fn run_revival(problem: &AcrProblem) -> Result<RevivalRun> {
    problem.validate()?;
    let mut timings = StageTimings::default();
    let hamiltonian = timed(&mut timings.hamiltonian, || build_hamiltonian(&problem.spec))?;
    let decomposition = timed(&mut timings.decomposition, || spectral_decompose(&hamiltonian))?;
    let u = timed(&mut timings.propagator, || {
        propagator_matrix(&decomposition, problem.tau)
    });
    let solution = timed(&mut timings.solve, || solve_acr(problem, &u))?;
    Ok(RevivalRun {
        hamiltonian,
        decomposition,
        propagator: Some(u),
        solution,
        timings,
    })
}

/// Highest-weight revival on site 1, valid for every spin magnitude.
pub fn run_higher_spin(spec: &ChainSpec, tau: f64) -> Result<RevivalRun> {
    let mut timings = StageTimings::default();
    let hamiltonian = timed(&mut timings.hamiltonian, || build_hamiltonian(spec))?;
    let decomposition = timed(&mut timings.decomposition, || spectral_decompose(&hamiltonian))?;
    let solution = timed(&mut timings.solve, || {
        solve_acr_higher_spin_from_decomposition(&spec.geom, &decomposition, tau)
    })?;
    Ok(RevivalRun {
        hamiltonian,
        decomposition,
        propagator: None,
        solution,
        timings,
    })
}
