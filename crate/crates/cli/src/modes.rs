//! The experiment modes. Each returns an [`Outcome`]; nothing touches the
//! filesystem until [`write_outcome`].

use std::time::Instant;

use acr_core::ensembles::{goe_matrix, haar_unitary, poisson_levels, seeded_rng};
use acr_core::{
    build_hamiltonian, energy_series, level_spacing_ratio, mpr, propagator_matrix, reduced_density,
    relative_energy_drift, run_higher_spin, run_revival, scan_time_series, spectral_decompose, spin_expectations,
    AcrProblem, ChainSpec, DenseOperator, Execution, Family, ParticipationRatio, Propagator, RevivalRun, Spin,
    SpinExpectation,
};

use crate::config::{chain_spec, Experiment, Mode, ProblemSettings};
use crate::error::{HarnessError, Result};
use crate::output::{fmt_float, put, put_f64, series_csv, summary_json, table_csv, write_atomic, Summary};

pub const RESIDUAL_LIMIT: f64 = 1e-8;
pub const PURITY_TOLERANCE: f64 = 1e-12;
pub const BLOCH_TOLERANCE: f64 = 1e-10;
pub const ENERGY_DRIFT_LIMIT: f64 = 1e-9;
/// Largest dimension sampled for the random-matrix references in diagnostics.
pub const REFERENCE_DIM_CAP: usize = 512;

/// `value <= limit`, false for NaN.
fn within(value: f64, limit: f64) -> bool {
    value <= limit
}

/// Computed results of one mode, ready to be written.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub summary: Summary,
    /// `(file name, contents)` for CSV outputs.
    pub tables: Vec<(String, String)>,
    /// Tolerance or acceptance checks that did not hold.
    pub failures: Vec<String>,
}

/// A solved and verified revival.
#[derive(Debug)]
pub struct RevivalReport {
    pub run: RevivalRun,
    /// Collapse site at `t = 0`.
    pub initial: SpinExpectation,
    /// Revival site at `t = tau`.
    pub revived: SpinExpectation,
}

/// Solves the revival problem. Spin 1/2 takes the general site-resolved
/// path; higher spins the highest-weight path on site 1.
pub fn solve_revival(spec: &ChainSpec, problem: &ProblemSettings) -> Result<RevivalReport> {
    let run = if spec.geom.spin() == Spin::HALF {
        let p = AcrProblem::new(*spec, problem.q, problem.alpha, problem.p, problem.beta, problem.tau)?;
        run_revival(&p)?
    } else {
        run_higher_spin(spec, problem.tau)?
    };
    let spin = spec.geom.spin();
    let psi0 = &run.solution.psi0;
    let initial = spin_expectations(&reduced_density(psi0, problem.q, &spec.geom)?, spin);
    let psi_tau = Propagator::new(&run.decomposition, problem.tau).apply(psi0);
    let revived = spin_expectations(&reduced_density(&psi_tau, problem.p, &spec.geom)?, spin);
    Ok(RevivalReport { run, initial, revived })
}

/// Post-conditions every solved state must meet.
pub fn solution_checks(report: &RevivalReport, spec: &ChainSpec, problem: &ProblemSettings) -> Vec<String> {
    let mut failures = Vec::new();
    let sol = &report.run.solution;
    if !within(sol.residual, RESIDUAL_LIMIT) {
        failures.push(format!(
            "homogeneous residual {:.3e} above {RESIDUAL_LIMIT:e}",
            sol.residual
        ));
    }
    if !within((report.initial.purity - 1.0).abs(), PURITY_TOLERANCE) {
        failures.push(format!("collapse-site purity at t=0 is {:.15}", report.initial.purity));
    }
    let spin = spec.geom.spin();
    let expected = if spin == Spin::HALF {
        problem.alpha.spin_vector()
    } else {
        [0.0, 0.0, spin.value()]
    };
    let dev = report
        .initial
        .vector()
        .iter()
        .zip(expected)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if !within(dev, BLOCH_TOLERANCE) {
        failures.push(format!("collapse-site Bloch vector at t=0 off by {dev:.3e}"));
    }
    failures
}

fn common_summary(exp: &Experiment, spec: &ChainSpec) -> Summary {
    let mut s = Summary::new();
    put(&mut s, "mode", exp.mode.name());
    put(&mut s, "family", family_name(&spec.family));
    put(&mut s, "sites", spec.geom.sites());
    put(&mut s, "spin", spec.geom.spin().to_string());
    put(&mut s, "dim", spec.geom.dim());
    put_f64(&mut s, "tau", exp.problem.tau);
    s
}

fn family_name(f: &Family) -> &'static str {
    match f {
        Family::TiltedIsing(_) => "tilted-ising",
        Family::XyFields(_) => "xy-fields",
        Family::Generic(_) => "generic",
    }
}

fn put_expectation(s: &mut Summary, prefix: &str, e: &SpinExpectation) {
    put_f64(s, &format!("{prefix}_sx"), e.sx);
    put_f64(s, &format!("{prefix}_sy"), e.sy);
    put_f64(s, &format!("{prefix}_sz"), e.sz);
    put_f64(s, &format!("{prefix}_purity"), e.purity);
    put_f64(s, &format!("{prefix}_bloch_norm"), e.bloch_norm);
}

/// `build-state` and `evolve`.
pub fn run(exp: &Experiment) -> Result<Outcome> {
    let started = Instant::now();
    let spec = exp.spec;
    let report = solve_revival(&spec, &exp.problem)?;
    let mut failures = solution_checks(&report, &spec, &exp.problem);

    let t = Instant::now();
    let ratio = match &report.run.propagator {
        Some(u) => mpr(u.matrix().as_ref())?,
        None => mpr(propagator_matrix(&report.run.decomposition, exp.problem.tau)
            .matrix()
            .as_ref())?,
    };
    let mpr_seconds = t.elapsed().as_secs_f64();

    let mut s = common_summary(exp, &spec);
    put(&mut s, "q", exp.problem.q);
    put(&mut s, "p", exp.problem.p);
    let sol = &report.run.solution;
    put_f64(&mut s, "delta_abs", sol.delta.norm());
    put_f64(&mut s, "v_condition", sol.condition);
    put_f64(&mut s, "residual", sol.residual);
    put_expectation(&mut s, "t0_q", &report.initial);
    put_expectation(&mut s, "tau_p", &report.revived);
    put_f64(
        &mut s,
        "revival_gap",
        spec.geom.spin().value() - report.revived.bloch_norm,
    );
    put_f64(&mut s, "mpr", ratio.raw);
    put_f64(&mut s, "mpr_normalized", ratio.normalized);
    let tm = report.run.timings;
    put_f64(&mut s, "time_hamiltonian_s", tm.hamiltonian);
    put_f64(&mut s, "time_decomposition_s", tm.decomposition);
    put_f64(&mut s, "time_propagator_s", tm.propagator);
    put_f64(&mut s, "time_solve_s", tm.solve);
    put_f64(&mut s, "time_mpr_s", mpr_seconds);

    let mut tables = Vec::new();
    if exp.mode == Mode::Evolve {
        let t = Instant::now();
        let psi0 = &sol.psi0;
        let series = scan_time_series(
            &report.run.decomposition,
            psi0,
            &exp.series_sites,
            &exp.grid,
            &spec.geom,
        )?;
        if !series.check_bounds(spec.geom.spin()) {
            failures.push("time series violates Bloch-norm or purity bounds".into());
        }
        let energies = energy_series(
            &report.run.hamiltonian,
            &report.run.decomposition,
            psi0,
            &exp.grid,
            Execution::default(),
        )?;
        let drift = relative_energy_drift(&energies, &report.run.decomposition);
        if !within(drift, ENERGY_DRIFT_LIMIT) {
            failures.push(format!(
                "relative energy drift {drift:.3e} above {ENERGY_DRIFT_LIMIT:e}"
            ));
        }
        put_f64(&mut s, "energy_drift", drift);
        put(&mut s, "grid_points", exp.grid.len());
        put_f64(&mut s, "grid_t_max", exp.grid.last().copied().unwrap_or(0.0));
        put_f64(&mut s, "time_series_s", t.elapsed().as_secs_f64());
        tables.push(("series.csv".to_string(), series_csv(&series)));
    }
    put_f64(&mut s, "time_total_s", started.elapsed().as_secs_f64());
    Ok(finish(s, tables, failures))
}

fn finish(mut summary: Summary, tables: Vec<(String, String)>, failures: Vec<String>) -> Outcome {
    put(
        &mut summary,
        "status",
        if failures.is_empty() { "ok" } else { "failed" },
    );
    put(&mut summary, "failure_count", failures.len());
    for (i, f) in failures.iter().enumerate() {
        put(&mut summary, &format!("failure_{}", i + 1), f.as_str());
    }
    Outcome {
        summary,
        tables,
        failures,
    }
}

/// One row of the size sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub sites: usize,
    /// `1/2 - |S_p(tau)|`.
    pub gap: f64,
    pub purity: f64,
    pub bloch_norm: f64,
    pub delta_abs: f64,
    pub condition: f64,
}

/// True when every entry is strictly below its predecessor.
pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

pub fn sweep_rows(exp: &Experiment) -> Result<(Vec<SweepRow>, Vec<String>)> {
    let family = exp.spec.family;
    let mut rows = Vec::with_capacity(exp.sweep_sizes.len());
    let mut failures = Vec::new();
    for &l in &exp.sweep_sizes {
        let spec = chain_spec(family, l, Spin::HALF)?;
        let report = solve_revival(&spec, &exp.problem)?;
        failures.extend(
            solution_checks(&report, &spec, &exp.problem)
                .into_iter()
                .map(|f| format!("L = {l}: {f}")),
        );
        rows.push(SweepRow {
            sites: l,
            gap: 0.5 - report.revived.bloch_norm,
            purity: report.revived.purity,
            bloch_norm: report.revived.bloch_norm,
            delta_abs: report.run.solution.delta.norm(),
            condition: report.run.solution.condition,
        });
    }
    Ok((rows, failures))
}

pub fn sweep_size(exp: &Experiment) -> Result<Outcome> {
    let started = Instant::now();
    let (rows, mut failures) = sweep_rows(exp)?;
    let gaps: Vec<f64> = rows.iter().map(|r| r.gap).collect();
    let monotone = strictly_decreasing(&gaps);
    if !monotone {
        failures.push(format!("revival gaps not strictly decreasing in L: {gaps:?}"));
    }
    let mut s = common_summary(exp, &exp.spec);
    s.remove("sites");
    s.remove("dim");
    put(&mut s, "q", exp.problem.q);
    put(&mut s, "p", exp.problem.p);
    put(
        &mut s,
        "sizes",
        rows.iter().map(|r| r.sites.to_string()).collect::<Vec<_>>().join(" "),
    );
    for r in &rows {
        put_f64(&mut s, &format!("gap_L{}", r.sites), r.gap);
        put_f64(&mut s, &format!("delta_abs_L{}", r.sites), r.delta_abs);
    }
    put(&mut s, "monotone_decreasing", monotone);
    put_f64(&mut s, "time_total_s", started.elapsed().as_secs_f64());
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.sites.to_string(),
                fmt_float(r.gap),
                fmt_float(r.purity),
                fmt_float(r.bloch_norm),
                fmt_float(r.delta_abs),
                fmt_float(r.condition),
            ]
        })
        .collect();
    let table = table_csv(
        &["L", "gap", "purity", "bloch_norm", "delta_abs", "v_condition"],
        &cells,
    );
    Ok(finish(s, vec![("sweep_size.csv".into(), table)], failures))
}

/// One row of the spin scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinScanRow {
    pub spin: Spin,
    pub sites: usize,
    /// `<S^z_1(tau)> / S`.
    pub sz_normalized: f64,
    pub purity: f64,
    pub delta_abs: f64,
    pub seconds: f64,
}

/// File-name form of a spin: `1_2`, `1`, `3_2`.
pub fn spin_label(spin: Spin) -> String {
    spin.to_string().replace('/', "_")
}

/// Rows, per-spin series tables, and check failures.
pub type SpinScanResult = (Vec<SpinScanRow>, Vec<(String, String)>, Vec<String>);

pub fn spin_scan_rows(exp: &Experiment, with_series: bool) -> Result<SpinScanResult> {
    let family = exp.spec.family;
    let tau = exp.problem.tau;
    let mut rows = Vec::new();
    let mut tables = Vec::new();
    let mut failures = Vec::new();
    for &(spin, l) in &exp.spin_entries {
        let t = Instant::now();
        let spec = chain_spec(family, l, spin)?;
        let run = run_higher_spin(&spec, tau)?;
        let psi_tau = Propagator::new(&run.decomposition, tau).apply(&run.solution.psi0);
        let e = spin_expectations(&reduced_density(&psi_tau, 1, &spec.geom)?, spin);
        if !within(run.solution.residual, RESIDUAL_LIMIT) {
            failures.push(format!("S = {spin}: residual {:.3e}", run.solution.residual));
        }
        if with_series {
            let series = scan_time_series(&run.decomposition, &run.solution.psi0, &[1], &exp.grid, &spec.geom)?;
            if !series.check_bounds(spin) {
                failures.push(format!("S = {spin}: time series violates bounds"));
            }
            tables.push((format!("spin_scan_S{}.csv", spin_label(spin)), series_csv(&series)));
        }
        rows.push(SpinScanRow {
            spin,
            sites: l,
            sz_normalized: e.sz / spin.value(),
            purity: e.purity,
            delta_abs: run.solution.delta.norm(),
            seconds: t.elapsed().as_secs_f64(),
        });
    }
    Ok((rows, tables, failures))
}

pub fn spin_scan(exp: &Experiment) -> Result<Outcome> {
    let started = Instant::now();
    let (rows, mut tables, mut failures) = spin_scan_rows(exp, exp.write_csv)?;
    let values: Vec<f64> = rows.iter().map(|r| r.sz_normalized).collect();
    let decreasing = strictly_decreasing(&values);
    if !decreasing {
        failures.push(format!("normalized revivals not strictly decreasing in S: {values:?}"));
    }
    let mut s = common_summary(exp, &exp.spec);
    for key in ["sites", "dim", "spin"] {
        s.remove(key);
    }
    for r in &rows {
        let label = spin_label(r.spin);
        put(&mut s, &format!("sites_S{label}"), r.sites);
        put_f64(&mut s, &format!("sz_normalized_S{label}"), r.sz_normalized);
        put_f64(&mut s, &format!("purity_S{label}"), r.purity);
        put_f64(&mut s, &format!("time_S{label}_s"), r.seconds);
    }
    put(&mut s, "decreasing_in_spin", decreasing);
    put_f64(&mut s, "time_total_s", started.elapsed().as_secs_f64());
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.spin.to_string(),
                r.sites.to_string(),
                r.spin.local_dim().pow(r.sites as u32).to_string(),
                fmt_float(r.sz_normalized),
                fmt_float(r.purity),
                fmt_float(r.delta_abs),
            ]
        })
        .collect();
    tables.insert(
        0,
        (
            "spin_scan.csv".into(),
            table_csv(&["S", "L", "dim", "sz_normalized", "purity", "delta_abs"], &cells),
        ),
    );
    Ok(finish(s, tables, failures))
}

/// Chaos indicators of the configured chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub r_mean: f64,
    pub mpr: ParticipationRatio,
}

pub fn chain_diagnostics(spec: &ChainSpec, tau: f64) -> Result<Diagnostics> {
    let h: DenseOperator = build_hamiltonian(spec)?;
    let decomp = spectral_decompose(&h)?;
    let r_mean = level_spacing_ratio(decomp.eigenvalues())?;
    let u = propagator_matrix(&decomp, tau);
    Ok(Diagnostics {
        r_mean,
        mpr: mpr(u.matrix().as_ref())?,
    })
}

pub fn diagnostics(exp: &Experiment) -> Result<Outcome> {
    let started = Instant::now();
    let d = chain_diagnostics(&exp.spec, exp.problem.tau)?;
    let mut s = common_summary(exp, &exp.spec);
    put_f64(&mut s, "r_mean", d.r_mean);
    put_f64(&mut s, "mpr", d.mpr.raw);
    put_f64(&mut s, "mpr_normalized", d.mpr.normalized);

    // Seeded random-matrix references at a comparable size.
    let n = exp.spec.geom.dim().min(REFERENCE_DIM_CAP);
    let mut rng = seeded_rng(exp.seed);
    let poisson = level_spacing_ratio(&poisson_levels(&mut rng, n))?;
    let goe = spectral_decompose(&goe_matrix(&mut rng, n))?;
    let goe_r = level_spacing_ratio(goe.eigenvalues())?;
    let haar = mpr(haar_unitary(&mut rng, n).as_ref())?;
    put(&mut s, "seed", exp.seed);
    put(&mut s, "reference_dim", n);
    put_f64(&mut s, "reference_poisson_r", poisson);
    put_f64(&mut s, "reference_goe_r", goe_r);
    put_f64(&mut s, "reference_haar_mpr_normalized", haar.normalized);
    put_f64(&mut s, "time_total_s", started.elapsed().as_secs_f64());
    Ok(finish(s, Vec::new(), Vec::new()))
}

pub fn compute(exp: &Experiment) -> Result<Outcome> {
    match exp.mode {
        Mode::BuildState | Mode::Evolve => run(exp),
        Mode::SweepSize => sweep_size(exp),
        Mode::SpinScan => spin_scan(exp),
        Mode::Diagnostics => diagnostics(exp),
    }
}

pub fn write_outcome(exp: &Experiment, outcome: &Outcome) -> Result<()> {
    if exp.write_csv {
        for (name, contents) in &outcome.tables {
            write_atomic(&exp.out_dir, name, contents)?;
        }
    }
    if exp.write_json {
        write_atomic(&exp.out_dir, "summary.json", &summary_json(&outcome.summary))?;
    }
    Ok(())
}

/// Computes, writes, and turns recorded check failures into an error.
pub fn execute(exp: &Experiment) -> Result<Outcome> {
    let outcome = compute(exp)?;
    write_outcome(exp, &outcome)?;
    if !outcome.failures.is_empty() {
        return Err(HarnessError::Tolerance(outcome.failures.join("; ")));
    }
    Ok(outcome)
}
