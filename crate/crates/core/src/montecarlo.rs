//! Seeded Monte-Carlo estimate of the joint MAP error rate.
//!
//! Every trial draws from its own generator keyed by `(seed, trial index)`, so
//! the error count does not depend on how trials are split across workers.

use rand::rand_core::impls::fill_bytes_via_next;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use crate::decoder::MapDecoder;
use crate::error::{Error, Result};
use crate::geometry::{CombinedConstellation, PlanarPoint};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const CHUNK: u64 = 1 << 16;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// SplitMix64 stream whose starting state is a hash of `(seed, index)`.
#[derive(Debug, Clone)]
pub struct TrialRng {
    state: u64,
}

impl TrialRng {
    pub fn new(seed: u64, index: u64) -> Self {
        TrialRng {
            state: mix64(mix64(seed) ^ index.wrapping_mul(GOLDEN)),
        }
    }
}

impl RngCore for TrialRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        fill_bytes_via_next(self, dst)
    }
}

/// Error count of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub errors: u64,
    pub p_hat: f64,
    /// `3·sqrt(p̂(1 − p̂)/trials)`.
    pub ci_halfwidth: f64,
    pub seed: u64,
}

impl SimResult {
    fn new(trials: u64, errors: u64, seed: u64) -> Self {
        let p_hat = errors as f64 / trials as f64;
        SimResult {
            trials,
            errors,
            p_hat,
            ci_halfwidth: 3.0 * (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            seed,
        }
    }

    /// Whether `p` lies inside `p̂ ± ci_halfwidth`.
    pub fn contains(&self, p: f64) -> bool {
        (p - self.p_hat).abs() <= self.ci_halfwidth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Noise {
    Complex,
    #[cfg(test)]
    RealOnly,
}

fn count_errors(
    cc: &CombinedConstellation,
    decoder: &MapDecoder,
    sigma: f64,
    seed: u64,
    range: std::ops::Range<u64>,
    noise: Noise,
) -> u64 {
    let mut errors = 0;
    for t in range {
        let mut rng = TrialRng::new(seed, t);
        let sent = cc.priors().sample(rng.random::<f64>());
        let n_re: f64 = rng.sample(StandardNormal);
        let n_im: f64 = rng.sample(StandardNormal);
        let n_im = if noise == Noise::Complex { n_im } else { 0.0 };
        let r = cc.point(sent) + PlanarPoint::new(sigma * n_re, sigma * n_im);
        if decoder.decode(r) != sent {
            errors += 1;
        }
    }
    errors
}

fn run(cc: &CombinedConstellation, sigma2: f64, trials: u64, seed: u64, noise: Noise) -> Result<SimResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
            reason: "at least one trial is required",
        });
    }
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma2",
            value: sigma2,
            reason: "noise variance must be positive and finite",
        });
    }
    let decoder = MapDecoder::new(cc, sigma2);
    let sigma = sigma2.sqrt();
    let chunks = trials.div_ceil(CHUNK);
    let chunk = |c: u64| {
        count_errors(
            cc,
            &decoder,
            sigma,
            seed,
            c * CHUNK..((c + 1) * CHUNK).min(trials),
            noise,
        )
    };
    #[cfg(feature = "parallel")]
    let errors = {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(chunk).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let errors = (0..chunks).map(chunk).sum();
    Ok(SimResult::new(trials, errors, seed))
}

/// Simulates `trials` transmissions with complex noise of variance `σ²` per dimension.
pub fn simulate(cc: &CombinedConstellation, sigma2: f64, trials: u64, seed: u64) -> Result<SimResult> {
    run(cc, sigma2, trials, seed, Noise::Complex)
}

/// [`simulate`] on a dedicated pool of `workers` threads.
#[cfg(feature = "parallel")]
pub fn simulate_with_workers(
    cc: &CombinedConstellation,
    sigma2: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<SimResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|_| Error::InvalidParameter {
            name: "workers",
            value: workers as f64,
            reason: "could not start the worker pool",
        })?;
    pool.install(|| simulate(cc, sigma2, trials, seed))
}

/// Seed of the `index`-th configuration of a sweep.
pub fn sub_seed(seed: u64, index: usize) -> u64 {
    mix64(seed ^ mix64((index as u64).wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Simulates each `(constellation, σ²)` pair with its own derived seed, in input order.
pub fn sweep(configs: &[(CombinedConstellation, f64)], trials: u64, seed: u64) -> Result<Vec<SimResult>> {
    if configs.is_empty() {
        return Err(Error::EmptySweep);
    }
    configs
        .iter()
        .enumerate()
        .map(|(i, (cc, s2))| simulate(cc, *s2, trials, sub_seed(seed, i)))
        .collect()
}
