//! Strict JSON experiment configuration and its validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use acr_core::{
    bloch_from_alpha, BlochParameter, BlochPoint, ChainGeometry, ChainSpec, Complex64, Family, NearestNeighbor, Spin,
    TiltedIsing, XyFields,
};
use serde::Deserialize;

use crate::error::{HarnessError, Result};

/// Largest Hilbert-space dimension the harness will attempt.
pub const DIM_BUDGET: usize = 4096;
pub const DEFAULT_GRID_POINTS: usize = 501;
/// Default grid end as a multiple of `tau`.
pub const DEFAULT_GRID_SPAN: f64 = 1.25;
pub const DEFAULT_OUTPUT_DIR: &str = "acr-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    BuildState,
    Evolve,
    SweepSize,
    SpinScan,
    Diagnostics,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::BuildState => "build-state",
            Mode::Evolve => "evolve",
            Mode::SweepSize => "sweep-size",
            Mode::SpinScan => "spin-scan",
            Mode::Diagnostics => "diagnostics",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    TiltedIsing,
    XyFields,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryName {
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// `0.5`, `1`, or `"1/2"`, `"3/2"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SpinValue {
    Number(f64),
    Text(String),
}

/// `[re, im]` or the marker `"inf"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum BlochValue {
    Pair([f64; 2]),
    Marker(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub family: FamilyName,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(alias = "L")]
    pub sites: usize,
    #[serde(alias = "S", default)]
    pub spin: Option<SpinValue>,
    #[serde(default)]
    pub boundary: Option<BoundaryName>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default = "one")]
    pub q: usize,
    #[serde(default = "one")]
    pub p: usize,
    #[serde(default)]
    pub alpha: Option<BlochValue>,
    #[serde(default)]
    pub beta: Option<BlochValue>,
    pub tau: f64,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_max: Option<f64>,
    pub n_points: Option<usize>,
    /// Sites recorded in the time series; defaults to `q` and `p`.
    pub sites: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    pub directory: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinScanConfig {
    pub spins: Vec<SpinValue>,
    /// Chain length per spin, keyed like `"3/2"`; missing entries use the defaults.
    #[serde(default)]
    pub sizes: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    pub chain: ChainConfig,
    pub problem: ProblemConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub outputs: OutputsConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub spin_scan: Option<SpinScanConfig>,
}

/// Validated problem parameters.
#[derive(Debug, Clone, Copy)]
pub struct ProblemSettings {
    pub q: usize,
    pub p: usize,
    pub alpha: BlochPoint,
    pub beta: BlochPoint,
    pub tau: f64,
}

/// Everything a mode needs, checked before any computation starts.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub mode: Mode,
    pub spec: ChainSpec,
    pub problem: ProblemSettings,
    pub grid: Vec<f64>,
    pub series_sites: Vec<usize>,
    pub out_dir: PathBuf,
    pub write_csv: bool,
    pub write_json: bool,
    /// Ascending, deduplicated.
    pub sweep_sizes: Vec<usize>,
    /// `(S, L)` in the requested order.
    pub spin_entries: Vec<(Spin, usize)>,
    pub seed: u64,
}

/// Chain length used by the spin scan when the config gives none.
pub fn default_scan_size(spin: Spin) -> Option<usize> {
    match spin.twice() {
        1 => Some(12),
        2 => Some(7),
        3 => Some(6),
        4 => Some(5),
        _ => None,
    }
}

/// Run-time choices that do not live in the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub out_root: Option<PathBuf>,
    pub seed: Option<u64>,
}

fn config_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

pub fn parse_spin(v: &SpinValue) -> Result<Spin> {
    let s = match v {
        SpinValue::Number(x) => *x,
        SpinValue::Text(t) => parse_spin_text(t)?,
    };
    Spin::new(s).map_err(|e| config_err(e.to_string()))
}

fn parse_spin_text(t: &str) -> Result<f64> {
    let t = t.trim();
    let bad = || config_err(format!("cannot read spin {t:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            Ok(n / d)
        }
        None => t.parse().map_err(|_| bad()),
    }
}

fn parse_bloch(v: Option<&BlochValue>, name: &str) -> Result<BlochPoint> {
    match v {
        None => Ok(BlochPoint::UP),
        Some(BlochValue::Marker(m)) if m == "inf" => Ok(bloch_from_alpha(BlochParameter::Infinite)),
        Some(BlochValue::Marker(m)) => Err(config_err(format!("{name}: expected [re, im] or \"inf\", got {m:?}"))),
        Some(BlochValue::Pair([re, im])) => {
            if !(re.is_finite() && im.is_finite()) {
                return Err(config_err(format!("{name} must be finite")));
            }
            Ok(bloch_from_alpha(BlochParameter::Finite(Complex64::new(*re, *im))))
        }
    }
}

fn take_params(params: &BTreeMap<String, f64>, allowed: &[(&str, f64)]) -> Result<Vec<f64>> {
    for (k, v) in params {
        if !allowed.iter().any(|(name, _)| name == k) {
            let names: Vec<&str> = allowed.iter().map(|(n, _)| *n).collect();
            return Err(config_err(format!(
                "unknown parameter {k:?}, expected one of {names:?}"
            )));
        }
        if !v.is_finite() {
            return Err(config_err(format!("parameter {k} must be finite")));
        }
    }
    Ok(allowed
        .iter()
        .map(|(name, default)| params.get(*name).copied().unwrap_or(*default))
        .collect())
}

fn family_from(chain: &ChainConfig) -> Result<Family> {
    Ok(match chain.family {
        FamilyName::TiltedIsing => {
            let r = TiltedIsing::REFERENCE;
            let v = take_params(&chain.params, &[("g", r.g), ("h", r.h), ("J", r.j)])?;
            Family::TiltedIsing(TiltedIsing {
                g: v[0],
                h: v[1],
                j: v[2],
            })
        }
        FamilyName::XyFields => {
            let r = XyFields::REFERENCE;
            let v = take_params(&chain.params, &[("Jx", r.jx), ("Jy", r.jy), ("hx", r.hx), ("hy", r.hy)])?;
            Family::XyFields(XyFields {
                jx: v[0],
                jy: v[1],
                hx: v[2],
                hy: v[3],
            })
        }
        FamilyName::Generic => {
            let names = ["Jx", "Jy", "Jz", "hx", "hy", "hz"];
            let allowed: Vec<(&str, f64)> = names.iter().map(|n| (*n, 0.0)).collect();
            let v = take_params(&chain.params, &allowed)?;
            Family::Generic(NearestNeighbor {
                jx: v[0],
                jy: v[1],
                jz: v[2],
                hx: v[3],
                hy: v[4],
                hz: v[5],
            })
        }
    })
}

/// Builds a chain spec of the configured family at another size or spin.
pub fn chain_spec(family: Family, sites: usize, spin: Spin) -> Result<ChainSpec> {
    let dim = (spin.local_dim() as f64).powi(sites as i32);
    if dim > DIM_BUDGET as f64 {
        return Err(config_err(format!(
            "L = {sites}, S = {spin} gives dimension {dim}, above the budget {DIM_BUDGET}"
        )));
    }
    let geom = ChainGeometry::new(sites, spin).map_err(|e| config_err(e.to_string()))?;
    ChainSpec::new(geom, family).map_err(|e| config_err(e.to_string()))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks every field and resolves defaults.
    pub fn validate(&self, overrides: &Overrides) -> Result<Experiment> {
        let mode = match (overrides.mode, self.mode) {
            (Some(forced), Some(own)) if forced != own => {
                return Err(config_err(format!(
                    "config mode {} does not match subcommand {}",
                    own.name(),
                    forced.name()
                )))
            }
            (Some(m), _) | (None, Some(m)) => m,
            (None, None) => Mode::BuildState,
        };
        let spin = match &self.chain.spin {
            Some(v) => parse_spin(v)?,
            None => Spin::HALF,
        };
        let family = family_from(&self.chain)?;
        let spec = chain_spec(family, self.chain.sites, spin)?;

        let pc = &self.problem;
        if !(pc.tau > 0.0 && pc.tau.is_finite()) {
            return Err(config_err(format!("tau must be positive and finite, got {}", pc.tau)));
        }
        for (name, site) in [("q", pc.q), ("p", pc.p)] {
            if site == 0 || site > self.chain.sites {
                return Err(config_err(format!("{name} = {site} outside 1..={}", self.chain.sites)));
            }
        }
        let problem = ProblemSettings {
            q: pc.q,
            p: pc.p,
            alpha: parse_bloch(pc.alpha.as_ref(), "alpha")?,
            beta: parse_bloch(pc.beta.as_ref(), "beta")?,
            tau: pc.tau,
        };
        if spin != Spin::HALF && matches!(mode, Mode::BuildState | Mode::Evolve) {
            let highest = problem.alpha == BlochPoint::UP && problem.beta == BlochPoint::UP;
            if problem.q != 1 || problem.p != 1 || !highest {
                return Err(config_err(
                    "for S > 1/2 only q = p = 1 with alpha = beta = \"inf\" (highest weight) is supported",
                ));
            }
        }

        let t_max = self.grid.t_max.unwrap_or(DEFAULT_GRID_SPAN * pc.tau);
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(config_err(format!("grid t_max must be nonnegative, got {t_max}")));
        }
        let n_points = self.grid.n_points.unwrap_or(DEFAULT_GRID_POINTS);
        if n_points == 0 {
            return Err(config_err("grid n_points must be at least 1"));
        }
        let grid = acr_core::observables::uniform_grid(t_max, n_points);
        let series_sites = match &self.grid.sites {
            Some(s) if s.is_empty() => return Err(config_err("grid sites must not be empty")),
            Some(s) => s.clone(),
            None if problem.q == problem.p => vec![problem.q],
            None => vec![problem.q, problem.p],
        };
        for &s in &series_sites {
            if s == 0 || s > self.chain.sites {
                return Err(config_err(format!("grid site {s} outside 1..={}", self.chain.sites)));
            }
        }

        let formats = self
            .outputs
            .formats
            .clone()
            .unwrap_or_else(|| vec![Format::Csv, Format::Json]);
        let dir = self
            .outputs
            .directory
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        let out_dir = match &overrides.out_root {
            Some(root) if dir.is_relative() => root.join(dir),
            _ => dir,
        };

        let mut sweep_sizes = Vec::new();
        if mode == Mode::SweepSize {
            let sweep = self
                .sweep
                .as_ref()
                .ok_or_else(|| config_err("sweep-size needs a \"sweep\" section"))?;
            if sweep.sizes.is_empty() {
                return Err(config_err("sweep sizes must not be empty"));
            }
            sweep_sizes = sweep.sizes.clone();
            sweep_sizes.sort_unstable();
            sweep_sizes.dedup();
            for &l in &sweep_sizes {
                chain_spec(family, l, spin)?;
                if problem.q > l || problem.p > l {
                    return Err(config_err(format!(
                        "sites q = {}, p = {} do not fit L = {l}",
                        problem.q, problem.p
                    )));
                }
            }
            if spin != Spin::HALF {
                return Err(config_err("sweep-size is defined for spin 1/2"));
            }
        }

        let mut spin_entries = Vec::new();
        if mode == Mode::SpinScan {
            let scan = self
                .spin_scan
                .as_ref()
                .ok_or_else(|| config_err("spin-scan needs a \"spin_scan\" section"))?;
            if scan.spins.is_empty() {
                return Err(config_err("spin_scan spins must not be empty"));
            }
            let mut sizes = BTreeMap::new();
            for (key, &l) in &scan.sizes {
                sizes.insert(parse_spin(&SpinValue::Text(key.clone()))?, l);
            }
            for v in &scan.spins {
                let s = parse_spin(v)?;
                let l = sizes
                    .get(&s)
                    .copied()
                    .or_else(|| default_scan_size(s))
                    .ok_or_else(|| config_err(format!("no chain length given for S = {s}")))?;
                chain_spec(family, l, s)?;
                spin_entries.push((s, l));
            }
        }

        Ok(Experiment {
            mode,
            spec,
            problem,
            grid,
            series_sites,
            out_dir,
            write_csv: formats.contains(&Format::Csv),
            write_json: formats.contains(&Format::Json),
            sweep_sizes,
            spin_entries,
            seed: overrides.seed.unwrap_or(0),
        })
    }
}
