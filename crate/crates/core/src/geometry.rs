//! Signal-space geometry: per-sender binary constellations on the plane and
//! the combined constellation seen by the receiver.
//!
//! Sender 1's waveform spans the real axis. Sender 2's waveform lies at angle
//! `θ = arccos(γφ)` from it, so an amplitude `a` of sender 2 maps to the point
//! `a·(γφ, sqrt(1 − γφ²))`.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::source::{BitPair, JointSourceDistribution};

/// Default relative tolerance of the energy check.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

/// Default bijectivity tolerance relative to `max |A_uv|`.
pub const BIJECTIVITY_TOLERANCE: f64 = 1e-9;

/// A point of the two-dimensional signal space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarPoint {
    pub re: f64,
    pub im: f64,
}

impl PlanarPoint {
    pub const ORIGIN: PlanarPoint = PlanarPoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        PlanarPoint { re, im }
    }

    pub fn real(re: f64) -> Self {
        PlanarPoint { re, im: 0.0 }
    }

    /// Unit vector at `angle` radians.
    pub fn unit(angle: f64) -> Self {
        PlanarPoint {
            re: angle.cos(),
            im: angle.sin(),
        }
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// `Re[self · conj(other)]`, the Euclidean inner product.
    pub fn dot(self, other: PlanarPoint) -> f64 {
        self.re * other.re + self.im * other.im
    }

    /// `Im[conj(self) · other]`, positive when `other` is counterclockwise of `self`.
    pub fn cross(self, other: PlanarPoint) -> f64 {
        self.re * other.im - self.im * other.re
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for PlanarPoint {
    type Output = PlanarPoint;
    fn add(self, rhs: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for PlanarPoint {
    type Output = PlanarPoint;
    fn sub(self, rhs: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for PlanarPoint {
    type Output = PlanarPoint;
    fn neg(self) -> PlanarPoint {
        PlanarPoint::new(-self.re, -self.im)
    }
}

impl Mul<f64> for PlanarPoint {
    type Output = PlanarPoint;
    fn mul(self, rhs: f64) -> PlanarPoint {
        PlanarPoint::new(self.re * rhs, self.im * rhs)
    }
}

impl Mul<PlanarPoint> for f64 {
    type Output = PlanarPoint;
    fn mul(self, rhs: PlanarPoint) -> PlanarPoint {
        rhs * self
    }
}

/// One sender's two signal points, for source bits 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constellation {
    pub s0: PlanarPoint,
    pub s1: PlanarPoint,
}

impl Constellation {
    /// Fails with `DegenerateConstellation { sender }` when the two points coincide.
    pub fn new(s0: PlanarPoint, s1: PlanarPoint, sender: u8) -> Result<Self> {
        if !(s0.is_finite() && s1.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "signal point",
                value: f64::NAN,
                reason: "coordinates must be finite",
            });
        }
        if s0 == s1 {
            return Err(Error::DegenerateConstellation { sender });
        }
        Ok(Constellation { s0, s1 })
    }

    /// Points `a0·dir` and `a1·dir`.
    pub fn on_ray(a0: f64, a1: f64, dir: PlanarPoint, sender: u8) -> Result<Self> {
        Constellation::new(a0 * dir, a1 * dir, sender)
    }

    pub fn point(&self, bit: u8) -> PlanarPoint {
        if bit == 0 {
            self.s0
        } else {
            self.s1
        }
    }

    /// `d = s1 − s0`.
    pub fn difference(&self) -> PlanarPoint {
        self.s1 - self.s0
    }

    /// `p·|s0|² + (1 − p)·|s1|²` with `p = Pr(bit = 0)`.
    pub fn average_energy(&self, p: f64) -> f64 {
        p * self.s0.norm_sqr() + (1.0 - p) * self.s1.norm_sqr()
    }

    /// True iff the average energy is within `tol·e` of `e`.
    pub fn check_energy(&self, p: f64, e: f64, tol: f64) -> bool {
        (self.average_energy(p) - e).abs() <= tol * e
    }

    pub fn translated(&self, w: PlanarPoint) -> Self {
        Constellation {
            s0: self.s0 + w,
            s1: self.s1 + w,
        }
    }

    pub fn negated(&self) -> Self {
        Constellation {
            s0: -self.s0,
            s1: -self.s1,
        }
    }
}

/// Waveform correlation and per-dimension noise variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGeometry {
    gamma_phi: f64,
    sigma2: f64,
}

impl ChannelGeometry {
    pub fn new(gamma_phi: f64, sigma2: f64) -> Result<Self> {
        if !(gamma_phi.abs() <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "gamma_phi",
                value: gamma_phi,
                reason: "waveform correlation must lie in [-1, 1]",
            });
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sigma2",
                value: sigma2,
                reason: "noise variance must be positive and finite",
            });
        }
        Ok(ChannelGeometry { gamma_phi, sigma2 })
    }

    pub fn gamma_phi(&self) -> f64 {
        self.gamma_phi
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Angle between the two waveforms, `arccos(γφ) ∈ [0, π]`.
    pub fn theta(&self) -> f64 {
        self.gamma_phi.acos()
    }

    /// Direction of sender 2's amplitude axis.
    pub fn sender2_direction(&self) -> PlanarPoint {
        sender2_direction(self.gamma_phi)
    }
}

/// `(γφ, sqrt(1 − γφ²))`, exact on the axes for `γφ ∈ {−1, 0, 1}`.
pub fn sender2_direction(gamma_phi: f64) -> PlanarPoint {
    PlanarPoint::new(gamma_phi, (1.0 - gamma_phi * gamma_phi).max(0.0).sqrt())
}

/// Projects the BPAM amplitudes of both senders onto the signal plane.
pub fn from_amplitudes(
    a10: f64,
    a11: f64,
    a20: f64,
    a21: f64,
    geom: &ChannelGeometry,
) -> Result<(Constellation, Constellation)> {
    let c1 = Constellation::on_ray(a10, a11, PlanarPoint::real(1.0), 1)?;
    let c2 = Constellation::on_ray(a20, a21, geom.sender2_direction(), 2)?;
    Ok((c1, c2))
}

/// The four sums `A_uv = S_1u + S_2v` together with their priors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedConstellation {
    points: [PlanarPoint; 4],
    priors: JointSourceDistribution,
}

impl CombinedConstellation {
    pub fn point(&self, pair: BitPair) -> PlanarPoint {
        self.points[pair.index()]
    }

    pub fn points(&self) -> [PlanarPoint; 4] {
        self.points
    }

    pub fn priors(&self) -> &JointSourceDistribution {
        &self.priors
    }

    pub fn prior(&self, pair: BitPair) -> f64 {
        self.priors.p(pair)
    }

    /// `max |A_uv|`, the scale used by the relative tolerances.
    pub fn scale(&self) -> f64 {
        self.points.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `max_{uv,lm} |A_uv − A_lm|`.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                d = d.max((self.points[i] - self.points[j]).norm());
            }
        }
        d
    }

    /// Smallest pairwise distance among the four points.
    pub fn min_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                d = d.min((self.points[i] - self.points[j]).norm());
            }
        }
        d
    }

    /// Default ambiguity tolerance, `1e-9 · max |A_uv|` (floored to stay positive).
    pub fn default_tolerance(&self) -> f64 {
        BIJECTIVITY_TOLERANCE * self.scale().max(self.diameter()).max(f64::MIN_POSITIVE)
    }

    /// True iff every pairwise distance exceeds `tol`.
    pub fn is_bijective(&self, tol: f64) -> bool {
        self.min_distance() > tol
    }

    /// `ζ = Re[(A10 − A00)·conj(A01 − A00)]`.
    pub fn zeta(&self) -> f64 {
        let a = self.points[2] - self.points[0];
        let b = self.points[1] - self.points[0];
        a.dot(b)
    }

    /// Returns the unit direction of the common line when all four points are
    /// collinear within `1e-9 · max |A_uv|`.
    ///
    /// The direction is oriented with a non-negative real part (positive
    /// imaginary part when vertical), so a real-axis constellation yields `(1, 0)`.
    pub fn collinear_direction(&self) -> Option<PlanarPoint> {
        let tol = self.default_tolerance();
        let origin = self.points[0];
        let mut far = PlanarPoint::ORIGIN;
        for p in &self.points {
            let d = *p - origin;
            if d.norm() > far.norm() {
                far = d;
            }
        }
        if far.norm() <= tol {
            return Some(PlanarPoint::real(1.0));
        }
        let mut dir = far * (1.0 / far.norm());
        if dir.re < 0.0 || (dir.re == 0.0 && dir.im < 0.0) {
            dir = -dir;
        }
        let off_line = self
            .points
            .iter()
            .map(|p| dir.cross(*p - origin).abs())
            .fold(0.0, f64::max);
        if off_line > tol {
            return None;
        }
        if self.points.iter().all(|p| p.im.abs() <= tol) {
            return Some(PlanarPoint::real(1.0));
        }
        Some(dir)
    }

    pub fn is_collinear(&self) -> bool {
        self.collinear_direction().is_some()
    }
}

/// Forms `A_uv = S_1u + S_2v` for all four message pairs, without deduplication.
pub fn combine(c1: &Constellation, c2: &Constellation, priors: JointSourceDistribution) -> CombinedConstellation {
    let points = BitPair::ALL.map(|b| c1.point(b.u) + c2.point(b.v));
    CombinedConstellation { points, priors }
}

/// Per-sender differences `d_j = s_j1 − s_j0` and the counterclockwise angle
/// `ψ ∈ [0, 2π)` from `d1` to `d2`.
pub fn pair_geometry(c1: &Constellation, c2: &Constellation) -> (PlanarPoint, PlanarPoint, f64) {
    let d1 = c1.difference();
    let d2 = c2.difference();
    let mut psi = (d2.arg() - d1.arg()).rem_euclid(TAU);
    if psi >= TAU {
        psi -= TAU;
    }
    (d1, d2, psi)
}
