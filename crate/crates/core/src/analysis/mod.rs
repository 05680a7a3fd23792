//! Error probability of joint MAP decoding: exact evaluation on the line and
//! in the plane, the union bound, and the high-SNR closed forms.
//!
//! For a transmitted pair `uv` and a competitor `lm`, the scaled score
//! difference `Δ_{uv,lm} = σ²(H_lm − H_uv)` is Gaussian with mean
//! `−|A_lm − A_uv|²/2 − σ² ln(p_uv/p_lm)` and standard deviation
//! `σ·|A_lm − A_uv|`; `uv` is decoded correctly iff all three of its
//! differences are negative.

pub mod bounds;
pub mod collinear;
pub mod normal;
pub mod planar;
pub mod quadrature;
pub mod table1;

pub use bounds::{closed_form_qam, high_snr_union_bound, pairwise_error_probability, union_bound};
pub use collinear::{decision_interval, exact_error_collinear, interval_constraints, IntervalConstraint};
pub use normal::{bvn_lower_orthant, phi, q};
pub use planar::exact_error_planar;
pub use table1::{table1_correct_prob, Table1Case};

use crate::error::Result;
use crate::geometry::CombinedConstellation;
use crate::source::BitPair;

/// Mean and spread of `Δ_{uv,lm}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaStats {
    pub mu: f64,
    pub sd: f64,
    /// `A_lm` and `A_uv` coincide (within the bijectivity tolerance); `sd` is then zero.
    pub degenerate: bool,
}

/// Statistics of `Δ_{uv,lm}` for `uv ≠ lm`.
pub fn delta_stats(cc: &CombinedConstellation, uv: BitPair, lm: BitPair, sigma2: f64) -> DeltaStats {
    debug_assert_ne!(uv, lm);
    let dist = (cc.point(lm) - cc.point(uv)).norm();
    let log_ratio = (cc.prior(uv) / cc.prior(lm)).ln();
    if dist <= cc.default_tolerance() {
        return DeltaStats {
            mu: -sigma2 * log_ratio,
            sd: 0.0,
            degenerate: true,
        };
    }
    DeltaStats {
        mu: -dist * dist / 2.0 - sigma2 * log_ratio,
        sd: sigma2.sqrt() * dist,
        degenerate: false,
    }
}

/// Which evaluation route produced an [`ErrorReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Collinear,
    Planar,
    ClosedForm,
}

/// Exact error probability and its per-pair decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub p_err_exact: f64,
    /// `P_c,uv`, lexicographic order.
    pub p_c_per_pair: [f64; 4],
    /// `1 − P_c,uv`, evaluated directly so that small error rates keep their
    /// relative accuracy.
    pub p_e_per_pair: [f64; 4],
    pub method: Method,
}

impl ErrorReport {
    pub(crate) fn assemble(cc: &CombinedConstellation, p_c: [f64; 4], p_e: [f64; 4], method: Method) -> Self {
        let p_err_exact = BitPair::ALL
            .iter()
            .map(|&b| cc.prior(b) * p_e[b.index()])
            .sum::<f64>()
            .clamp(0.0, 1.0);
        ErrorReport {
            p_err_exact,
            p_c_per_pair: p_c,
            p_e_per_pair: p_e,
            method,
        }
    }

    /// `Σ p_uv · P_c,uv`.
    pub fn p_correct(&self, cc: &CombinedConstellation) -> f64 {
        BitPair::ALL
            .iter()
            .map(|&b| cc.prior(b) * self.p_c_per_pair[b.index()])
            .sum()
    }
}

/// Exact error probability, routed to the interval path when the combined
/// constellation is collinear and to the bivariate-normal path otherwise.
pub fn exact_error(cc: &CombinedConstellation, sigma2: f64) -> Result<ErrorReport> {
    if cc.is_collinear() {
        exact_error_collinear(cc, sigma2)
    } else {
        exact_error_planar(cc, sigma2)
    }
}
