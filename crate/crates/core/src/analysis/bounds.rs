//! Union bound, its high-SNR form, and the 4-QAM closed form.

use super::normal::q;
use super::{delta_stats, DeltaStats};
use crate::geometry::CombinedConstellation;
use crate::source::{BitPair, JointSourceDistribution};

/// `Pr(Δ_{uv,lm} > 0)`: the probability that `lm` outscores a transmitted `uv`.
///
/// Coinciding points are decided by the prior ratio, ties by the lexicographic
/// rule of the decoder.
pub fn pairwise_error_probability(stats: DeltaStats, uv: BitPair, lm: BitPair) -> f64 {
    if stats.degenerate {
        return if stats.mu > 0.0 || (stats.mu == 0.0 && lm < uv) {
            1.0
        } else {
            0.0
        };
    }
    q(-stats.mu / stats.sd)
}

/// `Σ_uv Σ_{lm≠uv} p_uv·Pr(Δ_{uv,lm} > 0)`.
pub fn union_bound(cc: &CombinedConstellation, sigma2: f64) -> f64 {
    let mut total = 0.0;
    for uv in BitPair::ALL {
        for lm in BitPair::ALL.into_iter().filter(|&lm| lm != uv) {
            let s = delta_stats(cc, uv, lm, sigma2);
            total += cc.prior(uv) * pairwise_error_probability(s, uv, lm);
        }
    }
    total
}

/// Union bound with every pairwise term replaced by `Q(|A_lm − A_uv|/2σ)`.
pub fn high_snr_union_bound(d1_len: f64, d2_len: f64, psi: f64, priors: &JointSourceDistribution, sigma: f64) -> f64 {
    let cross = 2.0 * d1_len * d2_len * psi.cos();
    let base = d1_len * d1_len + d2_len * d2_len;
    let t = |d: f64| q(d / (2.0 * sigma));
    t(d1_len)
        + t(d2_len)
        + priors.agree() * t((base + cross).max(0.0).sqrt())
        + priors.disagree() * t((base - cross).max(0.0).sqrt())
}

/// Symbol error rate of a rectangular 4-QAM grid with side lengths `d1_len`, `d2_len`.
pub fn closed_form_qam(d1_len: f64, d2_len: f64, sigma: f64) -> f64 {
    let a = q(d1_len / (2.0 * sigma));
    let b = q(d2_len / (2.0 * sigma));
    // 1 − (1 − a)(1 − b) without the cancellation
    a + b - a * b
}
