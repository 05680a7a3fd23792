//! Constellation designers: the antipodal baseline, individually optimized
//! BPAM, the high-SNR joint designs for orthogonal, collinear and general
//! waveforms, and an exhaustive numerical search.
//!
//! Every sender transmits a real amplitude along its own waveform direction,
//! so a design is fully described by the four amplitudes `a_jb`.

mod search;

pub use search::{numerical_search, GridSpec};

use crate::analysis::exact_error;
use crate::error::{Error, Result};
use crate::geometry::{
    combine, sender2_direction, ChannelGeometry, CombinedConstellation, Constellation, PlanarPoint, ENERGY_TOLERANCE,
};
use crate::source::JointSourceDistribution;

/// Relative gap below which the two energy-equation roots count as tied.
pub const BRANCH_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignInput {
    pub priors: JointSourceDistribution,
    pub e1: f64,
    pub e2: f64,
    pub gamma_phi: f64,
    pub sigma2: f64,
}

impl DesignInput {
    pub fn new(priors: JointSourceDistribution, e1: f64, e2: f64, gamma_phi: f64, sigma2: f64) -> Result<Self> {
        for (name, value) in [("e1", e1), ("e2", e2)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "energy must be positive and finite",
                });
            }
        }
        ChannelGeometry::new(gamma_phi, sigma2)?;
        Ok(DesignInput {
            priors,
            e1,
            e2,
            gamma_phi,
            sigma2,
        })
    }

    pub fn geometry(&self) -> ChannelGeometry {
        ChannelGeometry::new(self.gamma_phi, self.sigma2).expect("validated in DesignInput::new")
    }

    /// `d_{1,max}` and `d_{2,max}`.
    pub fn d_max(&self) -> (f64, f64) {
        (
            max_separation_distance(self.priors.p1(), self.e1),
            max_separation_distance(self.priors.p2(), self.e2),
        )
    }
}

/// Which root of the energy equation fixed sender 2's position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBranch {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignResult {
    pub c1: Constellation,
    pub c2: Constellation,
    /// `None` when no root was chosen (maximum separation or a baseline design).
    pub branch: Option<RootBranch>,
    /// The sender with the larger `d_max` was designed first.
    pub swapped: bool,
}

impl DesignResult {
    pub fn combined(&self, priors: JointSourceDistribution) -> CombinedConstellation {
        combine(&self.c1, &self.c2, priors)
    }

    /// `[a10, a11, a20, a21]`, the coordinates along each sender's waveform.
    pub fn amplitudes(&self, gamma_phi: f64) -> [f64; 4] {
        let dir2 = sender2_direction(gamma_phi);
        [self.c1.s0.re, self.c1.s1.re, self.c2.s0.dot(dir2), self.c2.s1.dot(dir2)]
    }

    pub fn satisfies_energy(&self, input: &DesignInput) -> bool {
        self.c1.check_energy(input.priors.p1(), input.e1, ENERGY_TOLERANCE)
            && self.c2.check_energy(input.priors.p2(), input.e2, ENERGY_TOLERANCE)
    }
}

/// `sqrt(E/(p(1 − p)))`.
pub fn max_separation_distance(p: f64, e: f64) -> f64 {
    (e / (p * (1.0 - p))).sqrt()
}

/// Amplitudes of the largest-separation binary constellation with `Pr(bit 0) = p`.
fn max_separation_amplitudes(p: f64, e: f64) -> (f64, f64) {
    (-((1.0 - p) * e / p).sqrt(), (p * e / (1.0 - p)).sqrt())
}

/// Two points on the ray at angle `eta`, separated by `sqrt(E/(p(1 − p)))`
/// with average energy `E`.
pub fn max_separation(p: f64, e: f64, eta: f64) -> Result<Constellation> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "probability must lie in (0, 1)",
        });
    }
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "e",
            value: e,
            reason: "energy must be positive and finite",
        });
    }
    let (a0, a1) = max_separation_amplitudes(p, e);
    Constellation::on_ray(a0, a1, PlanarPoint::unit(eta), 1)
}

pub(crate) fn build(a: [f64; 4], gamma_phi: f64) -> Result<(Constellation, Constellation)> {
    let c1 = Constellation::on_ray(a[0], a[1], PlanarPoint::real(1.0), 1)?;
    let c2 = Constellation::on_ray(a[2], a[3], sender2_direction(gamma_phi), 2)?;
    Ok((c1, c2))
}

/// Wraps explicit amplitudes `[a10, a11, a20, a21]` as a design.
pub fn from_amplitude_array(a: [f64; 4], gamma_phi: f64) -> Result<DesignResult> {
    let (c1, c2) = build(a, gamma_phi)?;
    Ok(DesignResult {
        c1,
        c2,
        branch: None,
        swapped: false,
    })
}

/// Conventional antipodal BPAM, `(−sqrt(E_j), +sqrt(E_j))` for both senders.
pub fn antipodal(e1: f64, e2: f64, gamma_phi: f64) -> Result<DesignResult> {
    let (c1, c2) = build([-e1.sqrt(), e1.sqrt(), -e2.sqrt(), e2.sqrt()], gamma_phi)?;
    Ok(DesignResult {
        c1,
        c2,
        branch: None,
        swapped: false,
    })
}

/// Each sender at maximum separation from its own marginal, ignoring the
/// correlation between the sources.
pub fn individual(input: &DesignInput) -> Result<DesignResult> {
    let (a10, a11) = max_separation_amplitudes(input.priors.p1(), input.e1);
    let (a20, a21) = max_separation_amplitudes(input.priors.p2(), input.e2);
    let (c1, c2) = build([a10, a11, a20, a21], input.gamma_phi)?;
    Ok(DesignResult {
        c1,
        c2,
        branch: None,
        swapped: false,
    })
}

/// Joint design for orthogonal waveforms: both senders at maximum separation,
/// sender 2 on the imaginary axis.
pub fn design_orthogonal(input: &DesignInput) -> Result<DesignResult> {
    if input.gamma_phi != 0.0 {
        return Err(Error::WrongGammaPhi {
            gamma_phi: input.gamma_phi,
            expected: "gamma_phi = 0",
        });
    }
    let (a20, a21) = max_separation_amplitudes(input.priors.p2(), input.e2);
    Ok(DesignResult {
        c1: max_separation(input.priors.p1(), input.e1, 0.0)?,
        c2: Constellation::on_ray(a20, a21, PlanarPoint::new(0.0, 1.0), 2)?,
        branch: None,
        swapped: false,
    })
}

/// Both roots, as `(S20, S21)`, of `p·S20² + (1 − p)·S21² = E` with `S21 − S20 = d`.
pub(crate) fn energy_roots(p: f64, e: f64, d: f64) -> Result<[(f64, f64); 2]> {
    let disc = d * d * p * (p - 1.0) + e;
    if disc < 0.0 {
        return Err(Error::InfeasibleRoot { d2: d });
    }
    let r = disc.sqrt();
    let minus = d * p - r;
    let plus = d * p + r;
    Ok([(minus - d, minus), (plus - d, plus)])
}

/// Working frame of the joint designers: role 1 is the sender with the larger
/// `d_max`, and the priors are transposed when the roles are exchanged.
struct Roles {
    swapped: bool,
    priors: JointSourceDistribution,
    p: (f64, f64),
    e: (f64, f64),
    dmax: (f64, f64),
}

impl Roles {
    fn new(input: &DesignInput) -> Self {
        let (d1, d2) = input.d_max();
        let swapped = d2 > d1;
        let priors = if swapped {
            input.priors.transposed()
        } else {
            input.priors
        };
        let (e, dmax) = if swapped {
            ((input.e2, input.e1), (d2, d1))
        } else {
            ((input.e1, input.e2), (d1, d2))
        };
        Roles {
            swapped,
            priors,
            p: (priors.p1(), priors.p2()),
            e,
            dmax,
        }
    }

    /// Maps role amplitudes `[r1_0, r1_1, r2_0, r2_1]` back to sender order.
    fn to_senders(&self, a: [f64; 4]) -> [f64; 4] {
        if self.swapped {
            [a[2], a[3], a[0], a[1]]
        } else {
            a
        }
    }
}

/// Picks the root with the lower exact error; ties go to the minus root.
fn choose_branch(input: &DesignInput, candidates: [[f64; 4]; 2]) -> Result<DesignResult> {
    let mut scored = Vec::with_capacity(2);
    for a in candidates {
        let (c1, c2) = build(a, input.gamma_phi)?;
        let err = exact_error(&combine(&c1, &c2, input.priors), input.sigma2)?.p_err_exact;
        scored.push((c1, c2, err));
    }
    let (minus, plus) = (scored[0], scored[1]);
    let scale = minus.2.abs().max(plus.2.abs());
    let (c1, c2, branch) = if plus.2 < minus.2 && minus.2 - plus.2 > BRANCH_TIE_TOLERANCE * scale {
        (plus.0, plus.1, RootBranch::Plus)
    } else {
        (minus.0, minus.1, RootBranch::Minus)
    };
    Ok(DesignResult {
        c1,
        c2,
        branch: Some(branch),
        swapped: false,
    })
}

/// High-SNR joint design for identical (`γφ = 1`) or opposite (`γφ = −1`) waveforms.
///
/// The design places sender 2 at signed separation
/// `d2 = −4σ² ln(p10 + p01)/d1max + d1max/2` when `p00 + p11 ≥ p10 + p01`
/// (`d2 = 4σ² ln(p00 + p11)/d1max − d1max/2` otherwise) from its other point,
/// falling back to maximum separation when `|d2| ≥ d2max`.
pub fn design_collinear(input: &DesignInput) -> Result<DesignResult> {
    if input.gamma_phi.abs() != 1.0 {
        return Err(Error::WrongGammaPhi {
            gamma_phi: input.gamma_phi,
            expected: "gamma_phi = +1 or -1",
        });
    }
    let roles = Roles::new(input);
    let (d1max, d2max) = roles.dmax;
    let s2 = input.sigma2;
    let first_branch = roles.priors.agree() >= roles.priors.disagree();
    let d2 = if first_branch {
        -4.0 * s2 * roles.priors.disagree().ln() / d1max + d1max / 2.0
    } else {
        4.0 * s2 * roles.priors.agree().ln() / d1max - d1max / 2.0
    };
    let (r10, r11) = max_separation_amplitudes(roles.p.0, roles.e.0);
    // positions on the real line; sender 2's amplitude is its position times γφ
    let to_amplitudes = |pos: [f64; 4]| {
        let a = roles.to_senders(pos);
        [a[0], a[1], a[2] * input.gamma_phi, a[3] * input.gamma_phi]
    };
    let mut result = if d2.abs() >= d2max {
        let (m0, m1) = max_separation_amplitudes(roles.p.1, roles.e.1);
        let (r20, r21) = if first_branch { (m0, m1) } else { (-m0, -m1) };
        let (c1, c2) = build(to_amplitudes([r10, r11, r20, r21]), input.gamma_phi)?;
        DesignResult {
            c1,
            c2,
            branch: None,
            swapped: false,
        }
    } else {
        let roots = energy_roots(roles.p.1, roles.e.1, d2)?;
        choose_branch(input, roots.map(|(r20, r21)| to_amplitudes([r10, r11, r20, r21])))?
    };
    result.swapped = roles.swapped;
    Ok(result)
}

/// High-SNR joint design for a general waveform correlation `γφ = cos θ`.
///
/// Sender 2's difference vector is aligned so that `cos ψ = ±|γφ|`, positive
/// when `p00 + p11 ≥ p10 + p01`, and its length is `d1max/(2|cos ψ|)` when that
/// value lies in `[sqrt(d1max² + d2max² − 2·d1max·d2max·|cos ψ|), d2max]`,
/// `d2max` otherwise.
pub fn design_general(input: &DesignInput) -> Result<DesignResult> {
    if input.gamma_phi.abs() >= 1.0 {
        return Err(Error::WrongGammaPhi {
            gamma_phi: input.gamma_phi,
            expected: "|gamma_phi| < 1; use the collinear design",
        });
    }
    let roles = Roles::new(input);
    let (d1max, d2max) = roles.dmax;
    let cos_abs = input.gamma_phi.abs();
    let preferred = if roles.priors.agree() >= roles.priors.disagree() {
        1.0
    } else {
        -1.0
    };
    // sign of sender 2's amplitude difference giving cos ψ = preferred·|γφ|
    let sign = if input.gamma_phi < 0.0 { -preferred } else { preferred };
    let candidate = d1max / (2.0 * cos_abs);
    let lower = (d1max * d1max + d2max * d2max - 2.0 * d1max * d2max * cos_abs)
        .max(0.0)
        .sqrt();
    let interior = candidate >= lower && candidate <= d2max;
    let (r10, r11) = max_separation_amplitudes(roles.p.0, roles.e.0);
    let mut result = if !interior {
        let (m0, m1) = max_separation_amplitudes(roles.p.1, roles.e.1);
        let (c1, c2) = build(roles.to_senders([r10, r11, sign * m0, sign * m1]), input.gamma_phi)?;
        DesignResult {
            c1,
            c2,
            branch: None,
            swapped: false,
        }
    } else {
        let roots = energy_roots(roles.p.1, roles.e.1, sign * candidate)?;
        choose_branch(input, roots.map(|(r20, r21)| roles.to_senders([r10, r11, r20, r21])))?
    };
    result.swapped = roles.swapped;
    Ok(result)
}

/// Routes to the orthogonal, collinear or general joint design by `γφ`.
pub fn design_joint(input: &DesignInput) -> Result<DesignResult> {
    if input.gamma_phi == 0.0 {
        design_orthogonal(input)
    } else if input.gamma_phi.abs() == 1.0 {
        design_collinear(input)
    } else {
        design_general(input)
    }
}
