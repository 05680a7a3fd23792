//! Joint MAP decision rule over the combined constellation.

use crate::geometry::{CombinedConstellation, PlanarPoint};
use crate::source::BitPair;

/// Matched-filter output.
pub type ReceivedSample = PlanarPoint;

/// Decision score `H = ln p + (2·Re[r·conj(a)] − |a|²) / (2σ²)`.
pub fn score(r: ReceivedSample, a: PlanarPoint, prior: f64, sigma2: f64) -> f64 {
    prior.ln() + (2.0 * r.dot(a) - a.norm_sqr()) / (2.0 * sigma2)
}

/// Index of the largest score; the first maximum wins, which gives the
/// lexicographic tie-break `(0,0) < (0,1) < (1,0) < (1,1)`.
fn argmax(scores: [f64; 4]) -> usize {
    let mut best = 0;
    for i in 1..4 {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    best
}

/// Joint MAP estimate of the transmitted pair.
pub fn decode(r: ReceivedSample, cc: &CombinedConstellation, sigma2: f64) -> BitPair {
    let scores = BitPair::ALL.map(|b| score(r, cc.point(b), cc.prior(b), sigma2));
    BitPair::from_index(argmax(scores))
}

/// [`decode`] with the per-point constants hoisted out, for batch use.
#[derive(Debug, Clone, Copy)]
pub struct MapDecoder {
    // score = offset + r·weight
    offset: [f64; 4],
    weight: [PlanarPoint; 4],
}

impl MapDecoder {
    pub fn new(cc: &CombinedConstellation, sigma2: f64) -> Self {
        let mut offset = [0.0; 4];
        let mut weight = [PlanarPoint::ORIGIN; 4];
        for b in BitPair::ALL {
            let a = cc.point(b);
            offset[b.index()] = cc.prior(b).ln() - a.norm_sqr() / (2.0 * sigma2);
            weight[b.index()] = a * (1.0 / sigma2);
        }
        MapDecoder { offset, weight }
    }

    #[inline]
    pub fn decode(&self, r: ReceivedSample) -> BitPair {
        let scores = [0, 1, 2, 3].map(|i| self.offset[i] + r.dot(self.weight[i]));
        BitPair::from_index(argmax(scores))
    }
}
