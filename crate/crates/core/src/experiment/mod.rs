//! Experiment orchestration: SNR conventions, scheme dispatch, design tables,
//! error-rate sweeps and their CSV form.

pub mod config;
pub mod csv_io;
pub mod presets;

use std::fmt;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::analysis::{exact_error, union_bound};
use crate::design::{antipodal, design_joint, individual, numerical_search, DesignInput, DesignResult, GridSpec};
use crate::error::{Error, Result};
use crate::geometry::{CombinedConstellation, PlanarPoint, BIJECTIVITY_TOLERANCE};
use crate::montecarlo::{simulate, sub_seed, SimResult};
use crate::source::BitPair;

pub use config::{ExperimentConfig, NoiseSpec, SourceSpec};
pub use presets::Preset;

/// How an SNR in dB maps to the per-dimension noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrConvention {
    /// `SNR = (E1 + E2)/N0` with `N0 = σ²` for `γφ = ±1` and `2σ²` otherwise.
    PaperSectionIV,
    /// `σ² = 10^(−SNR/10)`.
    TableReproduction,
    /// The value is the variance itself.
    DirectSigma2,
}

impl SnrConvention {
    pub const ALL: [SnrConvention; 3] = [
        SnrConvention::PaperSectionIV,
        SnrConvention::TableReproduction,
        SnrConvention::DirectSigma2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SnrConvention::PaperSectionIV => "paper-section-IV",
            SnrConvention::TableReproduction => "table-reproduction",
            SnrConvention::DirectSigma2 => "direct-sigma2",
        }
    }
}

impl fmt::Display for SnrConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SnrConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SnrConvention::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownConvention(s.to_string()))
    }
}

/// Noise variance for `snr_db` under `convention`.
pub fn convert_snr(snr_db: f64, convention: SnrConvention, e1: f64, e2: f64, gamma_phi: f64) -> f64 {
    match convention {
        SnrConvention::PaperSectionIV => {
            let n0 = (e1 + e2) / 10f64.powf(snr_db / 10.0);
            if gamma_phi.abs() == 1.0 {
                n0
            } else {
                n0 / 2.0
            }
        }
        SnrConvention::TableReproduction => 10f64.powf(-snr_db / 10.0),
        SnrConvention::DirectSigma2 => snr_db,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Antipodal,
    Individual,
    Joint,
    Numerical,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Antipodal, Scheme::Individual, Scheme::Joint, Scheme::Numerical];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Antipodal => "antipodal",
            Scheme::Individual => "individual",
            Scheme::Joint => "joint",
            Scheme::Numerical => "numerical",
        }
    }

    /// Constellation pair of this scheme for `input`.
    pub fn design(self, input: &DesignInput, grid: GridSpec) -> Result<DesignResult> {
        match self {
            Scheme::Antipodal => antipodal(input.e1, input.e2, input.gamma_phi),
            Scheme::Individual => individual(input),
            Scheme::Joint => design_joint(input),
            Scheme::Numerical => numerical_search(input, grid),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown scheme `{s}`; expected antipodal, individual, joint or numerical"))
    }
}

/// One noise level of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisePoint {
    pub snr_db: Option<f64>,
    pub sigma2: f64,
}

impl ExperimentConfig {
    /// Noise levels for a given `γφ`, in configuration order.
    pub fn noise_points(&self, gamma_phi: f64) -> Result<Vec<NoisePoint>> {
        match &self.noise {
            NoiseSpec::Sigma2(v) => Ok(v
                .iter()
                .map(|&s| NoisePoint {
                    snr_db: None,
                    sigma2: s,
                })
                .collect()),
            NoiseSpec::SnrDb(v) => {
                let conv = self
                    .convention
                    .ok_or_else(|| Error::config(None, "convention", "SNR values need a convention"))?;
                v.iter()
                    .map(|&snr| {
                        let sigma2 = convert_snr(snr, conv, self.e1, self.e2, gamma_phi);
                        if sigma2 > 0.0 && sigma2.is_finite() {
                            Ok(NoisePoint {
                                snr_db: Some(snr),
                                sigma2,
                            })
                        } else {
                            Err(Error::config(
                                None,
                                "snr_db",
                                format!("{snr} does not give a positive variance"),
                            ))
                        }
                    })
                    .collect()
            }
        }
    }

    fn grid_spec(&self) -> GridSpec {
        GridSpec {
            points: self.grid,
            ..GridSpec::default()
        }
    }

    /// Scheme label, qualified by `γφ` when the configuration lists several.
    fn label(&self, name: &str, gamma_phi: f64) -> String {
        if self.gamma_phi.len() > 1 {
            format!("{name}[gamma_phi={gamma_phi}]")
        } else {
            name.to_string()
        }
    }

    /// Every `(γφ, noise point, design)` combination, in output order.
    fn tasks(&self) -> Result<Vec<Task>> {
        self.validate()?;
        let priors = self.priors()?;
        let mut tasks = Vec::new();
        for &g in &self.gamma_phi {
            for noise in self.noise_points(g)? {
                let input = DesignInput::new(priors, self.e1, self.e2, g, noise.sigma2)?;
                match self.amplitudes {
                    Some(a) => tasks.push(Task {
                        label: self.label("custom", g),
                        input,
                        noise,
                        source: Source::Amplitudes(a),
                    }),
                    None => tasks.extend(self.schemes.iter().map(|&s| Task {
                        label: self.label(s.as_str(), g),
                        input,
                        noise,
                        source: Source::Scheme(s),
                    })),
                }
            }
        }
        Ok(tasks)
    }
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Scheme(Scheme),
    Amplitudes([f64; 4]),
}

#[derive(Debug, Clone)]
struct Task {
    label: String,
    input: DesignInput,
    noise: NoisePoint,
    source: Source,
}

impl Task {
    fn design(&self, grid: GridSpec) -> Result<DesignResult> {
        match self.source {
            Source::Scheme(s) => s.design(&self.input, grid),
            Source::Amplitudes(a) => crate::design::from_amplitude_array(a, self.input.gamma_phi),
        }
    }
}

fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

/// One row of a design table.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignRow {
    pub scheme: String,
    pub gamma_phi: f64,
    pub snr_db: Option<f64>,
    pub sigma2: f64,
    pub s1: [PlanarPoint; 2],
    pub s2: [PlanarPoint; 2],
    /// `A00, A01, A10, A11`.
    pub combined: [PlanarPoint; 4],
    pub energy_ok: bool,
    pub p_err_exact: Option<f64>,
}

/// Designs every configured scheme at every noise point.
pub fn run_design(config: &ExperimentConfig) -> Result<Vec<DesignRow>> {
    let grid = config.grid_spec();
    let tasks = config.tasks()?;
    map_ordered(&tasks, |_, t| {
        let d = t.design(grid)?;
        let cc = d.combined(t.input.priors);
        Ok(DesignRow {
            scheme: t.label.clone(),
            gamma_phi: t.input.gamma_phi,
            snr_db: t.noise.snr_db,
            sigma2: t.noise.sigma2,
            s1: [d.c1.point(0), d.c1.point(1)],
            s2: [d.c2.point(0), d.c2.point(1)],
            combined: BitPair::ALL.map(|b| cc.point(b)),
            energy_ok: d.satisfies_energy(&t.input),
            p_err_exact: exact_error(&cc, t.noise.sigma2).ok().map(|r| r.p_err_exact),
        })
    })
    .into_iter()
    .collect()
}

/// Row-level outcome of a sweep point.
#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    /// Two combined points coincide; the exact error includes the ambiguity floor.
    NonBijective,
    Error(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Ok => f.write_str("ok"),
            RowStatus::NonBijective => f.write_str("non-bijective"),
            RowStatus::Error(e) => write!(f, "error: {e}"),
        }
    }
}

impl FromStr for RowStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ok" => Ok(RowStatus::Ok),
            "non-bijective" => Ok(RowStatus::NonBijective),
            _ => s
                .strip_prefix("error: ")
                .map(|e| RowStatus::Error(e.to_string()))
                .ok_or_else(|| format!("unknown status `{s}`")),
        }
    }
}

/// One `(noise point, scheme)` row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: Option<f64>,
    pub sigma2: f64,
    pub scheme: String,
    pub p_err_exact: Option<f64>,
    pub p_err_union: Option<f64>,
    pub p_err_mc: Option<f64>,
    pub mc_ci_halfwidth: Option<f64>,
    pub trials: u64,
    pub seed: Option<u64>,
    pub status: RowStatus,
}

fn evaluate_point(cc: &CombinedConstellation, noise: NoisePoint, label: String, trials: u64, seed: u64) -> SweepRow {
    let mut row = SweepRow {
        snr_db: noise.snr_db,
        sigma2: noise.sigma2,
        scheme: label,
        p_err_exact: None,
        p_err_union: Some(union_bound(cc, noise.sigma2)),
        p_err_mc: None,
        mc_ci_halfwidth: None,
        trials: 0,
        seed: None,
        status: RowStatus::Ok,
    };
    if !cc.is_bijective(BIJECTIVITY_TOLERANCE) {
        row.status = RowStatus::NonBijective;
    }
    match exact_error(cc, noise.sigma2) {
        Ok(r) => row.p_err_exact = Some(r.p_err_exact),
        Err(e) if row.status == RowStatus::Ok => row.status = RowStatus::Error(e.to_string()),
        Err(_) => {}
    }
    if trials > 0 {
        match simulate(cc, noise.sigma2, trials, seed) {
            Ok(sim) => {
                row.p_err_mc = Some(sim.p_hat);
                row.mc_ci_halfwidth = Some(sim.ci_halfwidth);
                row.trials = sim.trials;
                row.seed = Some(sim.seed);
            }
            Err(e) => row.status = RowStatus::Error(e.to_string()),
        }
    }
    row
}

/// Exact error, union bound and (when `trials > 0`) a Monte-Carlo estimate for
/// every `(γφ, noise point, scheme)`; the `i`-th row simulates with `sub_seed(seed, i)`.
///
/// Design failures and non-bijective constellations are reported in the row
/// status instead of aborting the sweep.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let grid = config.grid_spec();
    let tasks = config.tasks()?;
    Ok(map_ordered(&tasks, |i, t| match t.design(grid) {
        Ok(d) => evaluate_point(
            &d.combined(t.input.priors),
            t.noise,
            t.label.clone(),
            config.trials,
            sub_seed(config.seed, i),
        ),
        Err(e) => SweepRow {
            snr_db: t.noise.snr_db,
            sigma2: t.noise.sigma2,
            scheme: t.label.clone(),
            p_err_exact: None,
            p_err_union: None,
            p_err_mc: None,
            mc_ci_halfwidth: None,
            trials: 0,
            seed: None,
            status: RowStatus::Error(e.to_string()),
        },
    }))
}

/// Single-point evaluation: the sweep restricted to the first noise level.
pub fn evaluate(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let mut single = config.clone();
    single.noise = match &config.noise {
        NoiseSpec::SnrDb(v) => NoiseSpec::SnrDb(v.iter().take(1).copied().collect()),
        NoiseSpec::Sigma2(v) => NoiseSpec::Sigma2(v.iter().take(1).copied().collect()),
    };
    run_sweep(&single)
}

/// Monte-Carlo run of one designed constellation.
pub fn simulate_design(design: &DesignResult, input: &DesignInput, trials: u64, seed: u64) -> Result<SimResult> {
    simulate(&design.combined(input.priors), input.sigma2, trials, seed)
}

/// SNR in `[lo, hi]` at which the decreasing curve `p_err(snr)` crosses
/// `target`, by bisection on `log p_err`.
pub fn snr_for_error(mut p_err: impl FnMut(f64) -> Result<f64>, target: f64, lo: f64, hi: f64) -> Result<f64> {
    let invalid = |reason| Error::InvalidParameter {
        name: "target",
        value: target,
        reason,
    };
    if !(target > 0.0 && target < 1.0) {
        return Err(invalid("target error rate must lie in (0, 1)"));
    }
    let (mut a, mut b) = (lo, hi);
    if p_err(a)? < target || p_err(b)? > target {
        return Err(invalid("target is not bracketed by the SNR range"));
    }
    while b - a > 1e-6 {
        let m = 0.5 * (a + b);
        if p_err(m)? > target {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
