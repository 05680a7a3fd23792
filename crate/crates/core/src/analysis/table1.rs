//! High-SNR correct-decoding probability for collinear constellations,
//! indexed by the signs of `d1 = S11 − S10`, `d2 = S21 − S20` and by which of
//! the two is longer.

use super::normal::q;
use crate::error::{Error, Result};
use crate::source::JointSourceDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Table1Case {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
}

impl Table1Case {
    pub const ALL: [Table1Case; 8] = [
        Table1Case::I,
        Table1Case::II,
        Table1Case::III,
        Table1Case::IV,
        Table1Case::V,
        Table1Case::VI,
        Table1Case::VII,
        Table1Case::VIII,
    ];

    /// `(d1 > 0, d2 > 0, |d1| > |d2|)` for the row.
    fn signature(self) -> (bool, bool, bool) {
        let i = self as u8;
        (i < 4, i % 4 < 2, i.is_multiple_of(2))
    }

    /// Row matching the signed distances. Equal lengths map to the `|d1| > |d2|` row.
    pub fn classify(d1: f64, d2: f64) -> Option<Table1Case> {
        if d1 == 0.0 || d2 == 0.0 || !d1.is_finite() || !d2.is_finite() {
            return None;
        }
        let sig = (d1 > 0.0, d2 > 0.0, d1.abs() >= d2.abs());
        Table1Case::ALL.into_iter().find(|c| c.signature() == sig)
    }

    /// Whether `(d1, d2)` satisfies the row's conditions. Equal lengths fit both rows.
    pub fn admits(self, d1: f64, d2: f64) -> bool {
        let (pos1, pos2, longer) = self.signature();
        d1 != 0.0
            && d2 != 0.0
            && (d1 > 0.0) == pos1
            && (d2 > 0.0) == pos2
            && (d1.abs() == d2.abs() || (d1.abs() > d2.abs()) == longer)
    }

    pub fn name(self) -> &'static str {
        ["I", "II", "III", "IV", "V", "VI", "VII", "VIII"][self as usize]
    }
}

impl std::fmt::Display for Table1Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The row's closed-form `P̃_c`.
pub fn table1_correct_prob(
    case: Table1Case,
    d1: f64,
    d2: f64,
    priors: &JointSourceDistribution,
    sigma: f64,
) -> Result<f64> {
    if !case.admits(d1, d2) {
        return Err(Error::CaseMismatch {
            case: case.name(),
            d1,
            d2,
        });
    }
    let t = |x: f64| q(x / (2.0 * sigma));
    let (agree, disagree) = (priors.agree(), priors.disagree());
    Ok(match case {
        Table1Case::I => 1.0 - t(d2) - disagree * t(d1 - d2),
        Table1Case::II => 1.0 - t(d1) - disagree * t(d2 - d1),
        Table1Case::III => t(d2) - agree * t(d1 + d2),
        Table1Case::IV => disagree - t(d1) + agree * t(d1 + d2),
        Table1Case::V => disagree - t(d2) + agree * t(d1 + d2),
        Table1Case::VI => t(d1) - agree * t(d1 + d2),
        Table1Case::VII => t(d2) - disagree * t(d2 - d1),
        Table1Case::VIII => t(d1) - disagree * t(d1 - d2),
    })
}
