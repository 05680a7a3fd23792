//! Exhaustive search over energy-feasible amplitude pairs, scored by the exact error.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{build, energy_roots, DesignInput, DesignResult, RootBranch};
use crate::analysis::exact_error;
use crate::error::{Error, Result};
use crate::geometry::combine;

/// Resolution of [`numerical_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Grid points per sender over `a_j0 ∈ [−sqrt(E_j/p_j), sqrt(E_j/p_j)]`.
    pub points: usize,
    /// Points per axis of the refinement grid around the incumbent.
    pub refine_points: usize,
    /// Refinement step is the coarse step divided by this factor.
    pub refine_factor: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points: 400,
            refine_points: 21,
            refine_factor: 10.0,
        }
    }
}

struct Axis {
    p: f64,
    e: f64,
    limit: f64,
}

impl Axis {
    fn new(p: f64, e: f64) -> Self {
        Axis {
            p,
            e,
            limit: (e / p).sqrt(),
        }
    }

    /// `a1` completing the energy constraint for `a0`, with the given sign.
    fn partner(&self, a0: f64, negative: bool) -> f64 {
        let a1 = ((self.e - self.p * a0 * a0) / (1.0 - self.p)).max(0.0).sqrt();
        if negative {
            -a1
        } else {
            a1
        }
    }
}

fn score(input: &DesignInput, a: [f64; 4]) -> f64 {
    let Ok((c1, c2)) = build(a, input.gamma_phi) else {
        return f64::INFINITY;
    };
    match exact_error(&combine(&c1, &c2, input.priors), input.sigma2) {
        Ok(r) if r.p_err_exact.is_finite() => r.p_err_exact,
        _ => f64::INFINITY,
    }
}

/// Lowest score, ties to the lowest index; associative, so the parallel
/// reduction is deterministic.
fn better(x: (f64, usize), y: (f64, usize)) -> (f64, usize) {
    match x.0.total_cmp(&y.0) {
        std::cmp::Ordering::Less => x,
        std::cmp::Ordering::Greater => y,
        std::cmp::Ordering::Equal => {
            if x.1 <= y.1 {
                x
            } else {
                y
            }
        }
    }
}

fn argmin<F: Fn(usize) -> f64 + Sync>(n: usize, f: F) -> (f64, usize) {
    let start = (f64::INFINITY, usize::MAX);
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(|k| (f(k), k)).reduce(|| start, better)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(|k| (f(k), k)).fold(start, better)
    }
}

/// Minimizes the exact error over `a_10, a_20` on a uniform grid, for all four
/// sign choices of `a_11, a_21`, then refines once around the best point.
///
/// The error depends only on the difference vectors `d1`, `d2`, so the winner is
/// reported in a canonical form: the whole constellation is reflected through
/// the origin if needed to make `a11 > a10`, and each sender is rebuilt from
/// its difference with the lower root of the energy equation. When the two
/// senders are interchangeable, sender 1 takes the larger separation.
pub fn numerical_search(input: &DesignInput, grid: GridSpec) -> Result<DesignResult> {
    if grid.points < 2 || grid.refine_points == 0 || !(grid.refine_factor > 0.0) {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: grid.points as f64,
            reason: "grid needs at least two points per axis and a positive refinement",
        });
    }
    let ax = [
        Axis::new(input.priors.p1(), input.e1),
        Axis::new(input.priors.p2(), input.e2),
    ];
    let n = grid.points;
    let step = [0, 1].map(|j| 2.0 * ax[j].limit / (n - 1) as f64);
    let coarse = |k: usize| {
        let (cell, signs) = (k / 4, k % 4);
        let (i, j) = (cell / n, cell % n);
        let a10 = -ax[0].limit + step[0] * i as f64;
        let a20 = -ax[1].limit + step[1] * j as f64;
        [a10, a20, signs as f64]
    };
    let eval = |c: [f64; 3]| {
        let signs = c[2] as usize;
        let a = [
            c[0],
            ax[0].partner(c[0], signs & 1 == 1),
            c[1],
            ax[1].partner(c[1], signs & 2 == 2),
        ];
        score(input, a)
    };
    let (best, k) = argmin(n * n * 4, |k| eval(coarse(k)));
    if !best.is_finite() {
        return Err(Error::InvalidParameter {
            name: "sigma2",
            value: input.sigma2,
            reason: "no grid point could be evaluated",
        });
    }
    let centre = coarse(k);

    let m = grid.refine_points;
    let half = (m / 2) as f64;
    let fine = [0, 1].map(|j| step[j] / grid.refine_factor);
    let local = |r: usize| {
        let (i, j) = (r / m, r % m);
        let a10 = centre[0] + (i as f64 - half) * fine[0];
        let a20 = centre[1] + (j as f64 - half) * fine[1];
        [a10, a20, centre[2]]
    };
    let inside = |c: [f64; 3]| c[0].abs() <= ax[0].limit && c[1].abs() <= ax[1].limit;
    let (refined, r) = argmin(m * m, |r| {
        let c = local(r);
        if inside(c) {
            eval(c)
        } else {
            f64::INFINITY
        }
    });
    let winner = if refined < best { local(r) } else { centre };

    let signs = winner[2] as usize;
    let mut d1 = ax[0].partner(winner[0], signs & 1 == 1) - winner[0];
    let mut d2 = ax[1].partner(winner[1], signs & 2 == 2) - winner[1];
    let exchangeable = input.priors.transposed() == input.priors && input.e1 == input.e2;
    if exchangeable && d2.abs() > d1.abs() {
        std::mem::swap(&mut d1, &mut d2);
    }
    if d1 < 0.0 {
        d1 = -d1;
        d2 = -d2;
    }
    let clamp = |d: f64, a: &Axis| {
        let dmax = (a.e / (a.p * (1.0 - a.p))).sqrt();
        d.clamp(-dmax, dmax)
    };
    let (a10, a11) = energy_roots(ax[0].p, ax[0].e, clamp(d1, &ax[0]))?[0];
    let (a20, a21) = energy_roots(ax[1].p, ax[1].e, clamp(d2, &ax[1]))?[0];
    let (c1, c2) = build([a10, a11, a20, a21], input.gamma_phi)?;
    Ok(DesignResult {
        c1,
        c2,
        branch: Some(RootBranch::Minus),
        swapped: false,
    })
}
