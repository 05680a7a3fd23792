//! Named setups for the design tables and error-rate figures.
//!
//! All presets map SNR to noise with `σ² = 10^(−SNR/10)`, the mapping under
//! which the tabulated designs are reproduced; every `γφ` then sees the same
//! noise variance at a given SNR.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

use super::{ExperimentConfig, NoiseSpec, Scheme, SnrConvention, SourceSpec};

pub const CASE1: [f64; 4] = [0.091, 0.009, 0.009, 0.891];
pub const CASE2: [f64; 4] = [0.18, 0.02, 0.32, 0.48];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Table2,
    Table3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Table2,
        Preset::Table3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig9,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Table2 => "table2",
            Preset::Table3 => "table3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
        }
    }

    /// Tables are design listings; figures are error-rate sweeps.
    pub fn is_table(self) -> bool {
        matches!(self, Preset::Table2 | Preset::Table3)
    }

    pub fn config(self) -> ExperimentConfig {
        let curve = |p: [f64; 4], gphi: Vec<f64>, e1: f64| ExperimentConfig {
            source: SourceSpec::Joint(p),
            e1,
            e2: 1.0,
            gamma_phi: gphi,
            noise: NoiseSpec::SnrDb((0..=11).map(|i| 2.0 * i as f64).collect()),
            convention: Some(SnrConvention::TableReproduction),
            schemes: vec![Scheme::Antipodal, Scheme::Individual, Scheme::Joint],
            ..ExperimentConfig::default()
        };
        let table = |p: [f64; 4]| ExperimentConfig {
            source: SourceSpec::Joint(p),
            noise: NoiseSpec::SnrDb(vec![18.0]),
            convention: Some(SnrConvention::TableReproduction),
            schemes: Scheme::ALL.to_vec(),
            ..ExperimentConfig::default()
        };
        match self {
            Preset::Table2 => table(CASE1),
            Preset::Table3 => table(CASE2),
            Preset::Fig4 => curve(CASE1, vec![1.0], 1.0),
            Preset::Fig5 => curve(CASE2, vec![1.0], 1.0),
            Preset::Fig6 => curve(CASE1, vec![0.924], 1.0),
            Preset::Fig7 => curve(CASE2, vec![0.924], 1.0),
            Preset::Fig8 => curve(CASE2, vec![0.0, 0.383, 0.707, 0.924, 1.0], 1.0),
            Preset::Fig9 => curve(CASE1, vec![1.0], 2.0),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::config(
                    None,
                    "preset",
                    format!("unknown preset `{s}`; expected table2, table3 or fig4 to fig9"),
                )
            })
    }
}
