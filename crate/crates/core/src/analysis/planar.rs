//! Exact error of a two-dimensional combined constellation.
//!
//! For pair `uv` let `a = A_ūv − A_uv` and `b = A_uv̄ − A_uv`. The diagonal
//! competitor satisfies `Δ_{uv,ūv̄} = Δ_{uv,ūv} + Δ_{uv,uv̄} + α_uv` with
//! `α_uv = σ² ln(p_uv·p_ūv̄ / (p_ūv·p_uv̄)) − Re[a·conj(b)]`, so
//! `P_c,uv = Pr(X < 0, Y < 0) − β` where `β` is the mass of the triangle
//! `{X < 0, Y < 0, X + Y ≥ −α_uv}` (zero when `α_uv ≤ 0`).

use super::normal::{bvn_lower_orthant, bvn_upper_orthant, density, phi, q, MAX_CORRELATION};
use super::quadrature::integrate_with_breaks;
use super::{ErrorReport, Method};
use crate::error::{Error, Result};
use crate::geometry::CombinedConstellation;
use crate::source::BitPair;

/// `Pr(lo ≤ Z < hi)` using the tail on the side of the interval.
fn normal_interval(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        0.0
    } else if lo > 0.0 {
        q(lo) - q(hi)
    } else {
        phi(hi) - phi(lo)
    }
}

/// Parameters of the correlated pair `(Δ_{uv,ūv}, Δ_{uv,uv̄})` and the offset `α_uv`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairModel {
    pub mu1: f64,
    pub sd1: f64,
    pub mu2: f64,
    pub sd2: f64,
    pub rho: f64,
    pub alpha: f64,
}

pub(crate) fn pair_model(cc: &CombinedConstellation, uv: BitPair, sigma2: f64) -> PairModel {
    let (u_bar, v_bar, both) = (uv.flip_u(), uv.flip_v(), uv.flip_both());
    let a = cc.point(u_bar) - cc.point(uv);
    let b = cc.point(v_bar) - cc.point(uv);
    let p = |x: BitPair| cc.prior(x);
    let sigma = sigma2.sqrt();
    PairModel {
        mu1: -a.norm_sqr() / 2.0 - sigma2 * (p(uv) / p(u_bar)).ln(),
        sd1: sigma * a.norm(),
        mu2: -b.norm_sqr() / 2.0 - sigma2 * (p(uv) / p(v_bar)).ln(),
        sd2: sigma * b.norm(),
        rho: a.dot(b) / (a.norm() * b.norm()),
        alpha: sigma2 * (p(uv) * p(both) / (p(u_bar) * p(v_bar))).ln() - a.dot(b),
    }
}

/// `β = Pr(X < 0, Y < 0, X + Y ≥ −α)` for `α > 0`, by integrating the
/// conditional law of `X` given `Y` over `Y ∈ [−α, 0]`.
pub(crate) fn beta_term(m: &PairModel, abs_tol: f64) -> f64 {
    if m.alpha <= 0.0 {
        return 0.0;
    }
    let cond_sd = m.sd1 * (1.0 - m.rho * m.rho).sqrt();
    // standardized Y coordinate
    let t_lo = ((-m.alpha - m.mu2) / m.sd2).max(-39.0);
    let t_hi = ((-m.mu2) / m.sd2).min(39.0);
    if t_hi <= t_lo {
        return 0.0;
    }
    let integrand = |t: f64| {
        let y = m.mu2 + m.sd2 * t;
        let mean = m.mu1 + m.rho * m.sd1 * t;
        density(t) * normal_interval((-m.alpha - y - mean) / cond_sd, -mean / cond_sd)
    };
    let mut breaks = vec![t_lo];
    let mut k = t_lo.floor() + 1.0;
    while k < t_hi {
        breaks.push(k);
        k += 1.0;
    }
    breaks.push(t_hi);
    integrate_with_breaks(integrand, &breaks, abs_tol, 1e-11)
}

/// Exact joint-MAP error of a non-collinear combined constellation.
pub fn exact_error_planar(cc: &CombinedConstellation, sigma2: f64) -> Result<ErrorReport> {
    if cc.is_collinear() {
        return Err(Error::CollinearInput);
    }
    if !cc.is_bijective(cc.default_tolerance()) {
        return Err(Error::NonBijective);
    }
    let mut p_c = [0.0; 4];
    let mut p_e = [0.0; 4];
    for uv in BitPair::ALL {
        let m = pair_model(cc, uv, sigma2);
        if !(m.rho.abs() <= MAX_CORRELATION) {
            return Err(Error::CorrelationAtUnity { rho: m.rho });
        }
        let (h, k) = (-m.mu1 / m.sd1, -m.mu2 / m.sd2);
        let tails = q(h) + q(k);
        let beta = beta_term(&m, 1e-13 * tails.min(1.0));
        let both_fail = bvn_upper_orthant(h, k, m.rho);
        p_c[uv.index()] = (bvn_lower_orthant(h, k, m.rho)? - beta).clamp(0.0, 1.0);
        p_e[uv.index()] = (tails - both_fail + beta).clamp(0.0, 1.0);
    }
    Ok(ErrorReport::assemble(cc, p_c, p_e, Method::Planar))
}
