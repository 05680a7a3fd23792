//! Joint distribution of the two correlated binary sources.
//!
//! Probabilities are stored in lexicographic order `(0,0), (0,1), (1,0), (1,1)`
//! where the first bit belongs to sender 1 (`U`) and the second to sender 2 (`V`).

use crate::error::{Error, Result};

/// Accepted deviation of the raw inputs of [`JointSourceDistribution::from_joint`] from unit sum.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// One message pair `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitPair {
    pub u: u8,
    pub v: u8,
}

impl BitPair {
    /// All four pairs in lexicographic order.
    pub const ALL: [BitPair; 4] = [
        BitPair { u: 0, v: 0 },
        BitPair { u: 0, v: 1 },
        BitPair { u: 1, v: 0 },
        BitPair { u: 1, v: 1 },
    ];

    pub fn new(u: u8, v: u8) -> Self {
        debug_assert!(u < 2 && v < 2);
        BitPair { u, v }
    }

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index]
    }

    /// Position in the lexicographic order, `2u + v`.
    pub fn index(self) -> usize {
        (2 * self.u + self.v) as usize
    }

    /// `(ū, v)`: sender 1's bit flipped.
    pub fn flip_u(self) -> Self {
        BitPair {
            u: 1 - self.u,
            v: self.v,
        }
    }

    /// `(u, v̄)`: sender 2's bit flipped.
    pub fn flip_v(self) -> Self {
        BitPair {
            u: self.u,
            v: 1 - self.v,
        }
    }

    pub fn flip_both(self) -> Self {
        BitPair {
            u: 1 - self.u,
            v: 1 - self.v,
        }
    }
}

impl std::fmt::Display for BitPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.u, self.v)
    }
}

/// The four probabilities `p_uv = Pr(U = u, V = v)`, all strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSourceDistribution {
    p: [f64; 4],
}

impl JointSourceDistribution {
    /// Builds the distribution from the four joint probabilities.
    ///
    /// Inputs within [`SUM_TOLERANCE`] of unit sum are renormalized.
    pub fn from_joint(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        let raw = [p00, p01, p10, p11];
        const NAMES: [&str; 4] = ["p00", "p01", "p10", "p11"];
        for (value, name) in raw.iter().zip(NAMES) {
            if !(value.is_finite() && *value > 0.0) {
                return Err(Error::NonPositiveProbability { name, value: *value });
            }
        }
        let sum: f64 = raw.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::SumOutOfTolerance {
                sum,
                tolerance: SUM_TOLERANCE,
            });
        }
        Ok(JointSourceDistribution {
            p: raw.map(|x| x / sum),
        })
    }

    /// Builds the distribution from the marginals `p1 = Pr(U=0)`, `p2 = Pr(V=0)`
    /// and the correlation coefficient of `U` and `V`.
    pub fn from_marginals_correlation(p1: f64, p2: f64, gamma_m: f64) -> Result<Self> {
        for (name, value) in [("p1", p1), ("p2", p2)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "marginal must lie in (0, 1)",
                });
            }
        }
        if !gamma_m.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma_m",
                value: gamma_m,
                reason: "correlation must be finite",
            });
        }
        let p11 = gamma_m * (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt() + (1.0 - p1) * (1.0 - p2);
        let p10 = (1.0 - p1) - p11;
        let p01 = (1.0 - p2) - p11;
        let p00 = 1.0 - p10 - p01 - p11;
        let p = [p00, p01, p10, p11];
        if p.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InfeasibleCorrelation { p1, p2, gamma_m });
        }
        Ok(JointSourceDistribution { p })
    }

    /// Uniform, independent sources.
    pub fn uniform() -> Self {
        JointSourceDistribution { p: [0.25; 4] }
    }

    pub fn p(&self, pair: BitPair) -> f64 {
        self.p[pair.index()]
    }

    /// The probabilities in lexicographic order.
    pub fn as_array(&self) -> [f64; 4] {
        self.p
    }

    pub fn p00(&self) -> f64 {
        self.p[0]
    }
    pub fn p01(&self) -> f64 {
        self.p[1]
    }
    pub fn p10(&self) -> f64 {
        self.p[2]
    }
    pub fn p11(&self) -> f64 {
        self.p[3]
    }

    /// `Pr(U = 0)`.
    pub fn p1(&self) -> f64 {
        self.p[0] + self.p[1]
    }

    /// `Pr(V = 0)`.
    pub fn p2(&self) -> f64 {
        self.p[0] + self.p[2]
    }

    /// Correlation coefficient between `U` and `V`.
    pub fn gamma_m(&self) -> f64 {
        let (p1, p2) = (self.p1(), self.p2());
        (self.p[3] - (1.0 - p1) * (1.0 - p2)) / (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt()
    }

    /// `(p1, p2, gamma_m)`, the inverse of [`Self::from_marginals_correlation`].
    pub fn marginals_and_correlation(&self) -> (f64, f64, f64) {
        (self.p1(), self.p2(), self.gamma_m())
    }

    /// `p00 + p11`, the probability that both senders send the same bit.
    pub fn agree(&self) -> f64 {
        self.p[0] + self.p[3]
    }

    /// `p01 + p10`.
    pub fn disagree(&self) -> f64 {
        self.p[1] + self.p[2]
    }

    /// The distribution with the roles of the two senders exchanged.
    pub fn transposed(&self) -> Self {
        JointSourceDistribution {
            p: [self.p[0], self.p[2], self.p[1], self.p[3]],
        }
    }

    /// Maps one uniform draw in `[0, 1)` to a message pair by inverting the
    /// CDF over the lexicographic cell order.
    pub fn sample(&self, uniform: f64) -> BitPair {
        let mut acc = 0.0;
        for (i, &p) in self.p.iter().enumerate().take(3) {
            acc += p;
            if uniform < acc {
                return BitPair::from_index(i);
            }
        }
        BitPair::from_index(3)
    }
}
