//! Flat `key = value` experiment files.
//!
//! ```text
//! # Case-1 sources, identical waveforms
//! p_joint = 0.091, 0.009, 0.009, 0.891
//! e1 = 1
//! e2 = 1
//! gamma_phi = 1
//! snr_db = 0:22:2
//! convention = paper-section-IV
//! schemes = antipodal, individual, joint
//! trials = 0
//! seed = 1
//! ```
//!
//! Lists are comma-separated; `start:stop:step` expands to an inclusive range.
//! Command-line overrides go through [`ExperimentConfig::set`] with the same keys.

use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::source::JointSourceDistribution;

use super::{Scheme, SnrConvention};

pub const KEYS: [&str; 16] = [
    "p_joint",
    "p1",
    "p2",
    "gamma_m",
    "e1",
    "e2",
    "gamma_phi",
    "snr_db",
    "sigma2",
    "convention",
    "schemes",
    "trials",
    "seed",
    "output",
    "grid",
    "amplitudes",
];

#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Joint([f64; 4]),
    Marginals { p1: f64, p2: f64, gamma_m: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    SnrDb(Vec<f64>),
    Sigma2(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: SourceSpec,
    pub e1: f64,
    pub e2: f64,
    pub gamma_phi: Vec<f64>,
    pub noise: NoiseSpec,
    pub convention: Option<SnrConvention>,
    pub schemes: Vec<Scheme>,
    pub trials: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Grid points per sender for the numerical search.
    pub grid: usize,
    /// Explicit `[a10, a11, a20, a21]` for `evaluate`.
    pub amplitudes: Option<[f64; 4]>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            source: SourceSpec::Joint([0.25; 4]),
            e1: 1.0,
            e2: 1.0,
            gamma_phi: vec![1.0],
            noise: NoiseSpec::Sigma2(Vec::new()),
            convention: None,
            schemes: vec![Scheme::Antipodal, Scheme::Individual, Scheme::Joint],
            trials: 0,
            seed: 1,
            output: None,
            grid: 400,
            amplitudes: None,
        }
    }
}

fn number<T: FromStr>(line: Option<usize>, key: &str, text: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::config(line, key, format!("`{}` is not a valid number", text.trim())))
}

fn list(line: Option<usize>, key: &str, text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item.contains(':') {
            let parts: Vec<&str> = item.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::config(
                    line,
                    key,
                    format!("range `{item}` must be start:stop:step"),
                ));
            }
            let (start, stop, step): (f64, f64, f64) = (
                number(line, key, parts[0])?,
                number(line, key, parts[1])?,
                number(line, key, parts[2])?,
            );
            if !(step > 0.0) || stop < start {
                return Err(Error::config(
                    line,
                    key,
                    format!("range `{item}` needs a positive step and stop ≥ start"),
                ));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            out.extend((0..=n).map(|i| start + step * i as f64));
        } else {
            out.push(number(line, key, item)?);
        }
    }
    if out.is_empty() {
        return Err(Error::config(line, key, "empty list"));
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Parses a configuration file; later keys override earlier ones.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = ExperimentConfig::default();
        config.apply_text(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Applies the assignments in `text` on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(Some(i + 1), line, "expected `key = value`"));
            };
            self.set_at(Some(i + 1), key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one key, as given on the command line.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        self.set_at(None, key, value)
    }

    fn set_at(&mut self, line: Option<usize>, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        let key = key.as_str();
        match key {
            "p_joint" => {
                let v = list(line, key, value)?;
                let p: [f64; 4] = v
                    .try_into()
                    .map_err(|_| Error::config(line, key, "expected four probabilities p00, p01, p10, p11"))?;
                self.source = SourceSpec::Joint(p);
            }
            "p1" | "p2" | "gamma_m" => {
                let x: f64 = number(line, key, value)?;
                let (mut p1, mut p2, mut gm) = match self.source {
                    SourceSpec::Marginals { p1, p2, gamma_m } => (p1, p2, gamma_m),
                    SourceSpec::Joint(_) => (0.5, 0.5, 0.0),
                };
                match key {
                    "p1" => p1 = x,
                    "p2" => p2 = x,
                    _ => gm = x,
                }
                self.source = SourceSpec::Marginals { p1, p2, gamma_m: gm };
            }
            "e1" => self.e1 = number(line, key, value)?,
            "e2" => self.e2 = number(line, key, value)?,
            "gamma_phi" => self.gamma_phi = list(line, key, value)?,
            "snr_db" => self.noise = NoiseSpec::SnrDb(list(line, key, value)?),
            "sigma2" => self.noise = NoiseSpec::Sigma2(list(line, key, value)?),
            "convention" => {
                self.convention = Some(
                    value
                        .parse()
                        .map_err(|e: Error| Error::config(line, key, e.to_string()))?,
                )
            }
            "schemes" => {
                let mut schemes = Vec::new();
                for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    if name == "all" {
                        schemes.extend(Scheme::ALL);
                    } else {
                        schemes.push(name.parse().map_err(|e: String| Error::config(line, key, e))?);
                    }
                }
                self.schemes = schemes;
            }
            "trials" => self.trials = number(line, key, value)?,
            "seed" => self.seed = number(line, key, value)?,
            "output" => self.output = (!value.is_empty()).then(|| PathBuf::from(value)),
            "grid" => self.grid = number(line, key, value)?,
            "amplitudes" => {
                let v = list(line, key, value)?;
                self.amplitudes = Some(
                    v.try_into()
                        .map_err(|_| Error::config(line, key, "expected a10, a11, a20, a21"))?,
                );
            }
            _ => {
                return Err(Error::config(
                    line,
                    key,
                    format!("unknown key; expected one of {}", KEYS.join(", ")),
                ))
            }
        }
        Ok(())
    }

    /// Checks the cross-field requirements.
    pub fn validate(&self) -> Result<()> {
        self.priors()?;
        for (key, e) in [("e1", self.e1), ("e2", self.e2)] {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::config(None, key, "energy must be positive"));
            }
        }
        if let Some(g) = self.gamma_phi.iter().find(|g| !(g.abs() <= 1.0)) {
            return Err(Error::config(None, "gamma_phi", format!("{g} is outside [-1, 1]")));
        }
        if self.schemes.is_empty() {
            return Err(Error::config(None, "schemes", "at least one scheme is required"));
        }
        match &self.noise {
            NoiseSpec::SnrDb(v) if v.is_empty() => return Err(Error::config(None, "snr_db", "no noise points")),
            NoiseSpec::Sigma2(v) if v.is_empty() => {
                return Err(Error::config(None, "sigma2", "no noise points; set snr_db or sigma2"))
            }
            NoiseSpec::SnrDb(_) if self.convention.is_none() => {
                return Err(Error::config(
                    None,
                    "convention",
                    "SNR values need a convention: paper-section-IV, table-reproduction or direct-sigma2",
                ))
            }
            NoiseSpec::Sigma2(v) => {
                if let Some(s) = v.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
                    return Err(Error::config(None, "sigma2", format!("{s} is not a positive variance")));
                }
            }
            _ => {}
        }
        if self.grid < 2 {
            return Err(Error::config(None, "grid", "need at least two grid points"));
        }
        Ok(())
    }

    pub fn priors(&self) -> Result<JointSourceDistribution> {
        let made = match self.source {
            SourceSpec::Joint(p) => JointSourceDistribution::from_joint(p[0], p[1], p[2], p[3]),
            SourceSpec::Marginals { p1, p2, gamma_m } => {
                JointSourceDistribution::from_marginals_correlation(p1, p2, gamma_m)
            }
        };
        made.map_err(|e| {
            let field = match self.source {
                SourceSpec::Joint(_) => "p_joint",
                SourceSpec::Marginals { .. } => "p1/p2/gamma_m",
            };
            Error::config(None, field, e.to_string())
        })
    }
}
