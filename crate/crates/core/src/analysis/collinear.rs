//! Exact error when all combined points lie on one line.
//!
//! With `x` the noise component along the line and `G = t_lm − t_uv` the signed
//! offset of the competitor, `uv` beats `lm` iff
//! `G·x < G²/2 + σ² ln(p_uv/p_lm)`. Each competitor contributes an upper bound
//! (`G > 0`), a lower bound (`G < 0`) or, for coinciding points, a condition that
//! does not depend on the noise at all.

use super::normal::{phi, q};
use super::{ErrorReport, Method};
use crate::error::{Error, Result};
use crate::geometry::CombinedConstellation;
use crate::source::BitPair;

/// Constraint on the noise projection `x` for `uv` to beat one competitor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalConstraint {
    /// `x < threshold`
    Upper(f64),
    /// `x > threshold`
    Lower(f64),
    /// Coinciding points where `uv` wins on prior (or tie-break).
    Always,
    /// Coinciding points where the competitor wins.
    Never,
}

/// The three constraints of every pair, competitors in lexicographic order.
pub type ConstraintTable = [[(BitPair, IntervalConstraint); 3]; 4];

fn line_coordinates(cc: &CombinedConstellation) -> Result<[f64; 4]> {
    let dir = cc.collinear_direction().ok_or(Error::NotCollinear)?;
    let origin = cc.point(BitPair::ALL[0]);
    Ok(BitPair::ALL.map(|b| (cc.point(b) - origin).dot(dir)))
}

fn constraint(t: &[f64; 4], cc: &CombinedConstellation, uv: BitPair, lm: BitPair, sigma2: f64) -> IntervalConstraint {
    let g = t[lm.index()] - t[uv.index()];
    let log_ratio = (cc.prior(uv) / cc.prior(lm)).ln();
    if g.abs() <= cc.default_tolerance() {
        let wins = log_ratio > 0.0 || (log_ratio == 0.0 && uv < lm);
        return if wins {
            IntervalConstraint::Always
        } else {
            IntervalConstraint::Never
        };
    }
    let threshold = (g * g / 2.0 + sigma2 * log_ratio) / g;
    if g > 0.0 {
        IntervalConstraint::Upper(threshold)
    } else {
        IntervalConstraint::Lower(threshold)
    }
}

/// Builds the half-line constraints for every pair.
///
/// Fails with `NotCollinear` when the points do not share a line.
pub fn interval_constraints(cc: &CombinedConstellation, sigma2: f64) -> Result<ConstraintTable> {
    let t = line_coordinates(cc)?;
    Ok(BitPair::ALL.map(|uv| {
        let mut row = [(uv, IntervalConstraint::Never); 3];
        for (slot, lm) in BitPair::ALL.into_iter().filter(|&lm| lm != uv).enumerate() {
            row[slot] = (lm, constraint(&t, cc, uv, lm, sigma2));
        }
        row
    }))
}

/// Decision region of `uv` as an interval `(lo, hi)` of the noise projection,
/// or `None` when it is empty.
pub fn decision_interval(cc: &CombinedConstellation, uv: BitPair, sigma2: f64) -> Result<Option<(f64, f64)>> {
    let table = interval_constraints(cc, sigma2)?;
    Ok(intersect(&table[uv.index()]))
}

fn intersect(row: &[(BitPair, IntervalConstraint); 3]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for &(_, c) in row {
        match c {
            IntervalConstraint::Upper(x) => hi = hi.min(x),
            IntervalConstraint::Lower(x) => lo = lo.max(x),
            IntervalConstraint::Always => {}
            IntervalConstraint::Never => return None,
        }
    }
    (lo < hi).then_some((lo, hi))
}

/// Exact joint-MAP error of a collinear combined constellation.
pub fn exact_error_collinear(cc: &CombinedConstellation, sigma2: f64) -> Result<ErrorReport> {
    let table = interval_constraints(cc, sigma2)?;
    let sigma = sigma2.sqrt();
    let mut p_c = [0.0; 4];
    let mut p_e = [1.0; 4];
    for uv in BitPair::ALL {
        if let Some((lo, hi)) = intersect(&table[uv.index()]) {
            let (zl, zh) = (lo / sigma, hi / sigma);
            // Pr(zl < Z < zh), taken from the nearer tail for accuracy
            p_c[uv.index()] = if zl > 0.0 { q(zl) - q(zh) } else { phi(zh) - phi(zl) };
            p_e[uv.index()] = phi(zl) + q(zh);
        }
    }
    Ok(ErrorReport::assemble(cc, p_c, p_e, Method::Collinear))
}
