//! Acceptance criteria, one test per criterion.
//!
//! Each test prints a `C<n> PASS` or `C<n> FAIL` line with its sub-checks to
//! standard error, bypassing the test harness capture so the lines appear in
//! the log of a normal `cargo test` run. Sub-checks known to be unattainable
//! are listed per criterion; they are reported as failures and the test
//! asserts that they still fail, while every other sub-check must pass.

use std::io::Write;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use bpam_core::analysis::{
    closed_form_qam, exact_error, exact_error_planar, interval_constraints, q, table1_correct_prob, union_bound,
    IntervalConstraint, Method, Table1Case,
};
use bpam_core::design::{
    design_joint, individual, max_separation_distance, numerical_search, DesignInput, DesignResult, GridSpec,
};
use bpam_core::experiment::{convert_snr, snr_for_error, Preset, Scheme, SnrConvention};
use bpam_core::geometry::{combine, from_amplitudes, ChannelGeometry, CombinedConstellation, BIJECTIVITY_TOLERANCE};
use bpam_core::montecarlo::simulate;
#[cfg(feature = "parallel")]
use bpam_core::montecarlo::simulate_with_workers;
use bpam_core::source::{BitPair, JointSourceDistribution};

struct Verdict {
    id: &'static str,
    checks: Vec<(String, bool)>,
}

impl Verdict {
    fn new(id: &'static str) -> Self {
        Verdict { id, checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    /// Prints the verdict; panics unless exactly the `known_gaps` checks failed.
    fn finish(self, known_gaps: &[&str]) {
        let pass = self.checks.iter().all(|c| c.1);
        let mut line = format!("{} {}", self.id, if pass { "PASS" } else { "FAIL" });
        for (name, ok) in &self.checks {
            line += &format!("\n    [{}] {name}", if *ok { "ok" } else { "failed" });
        }
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "{line}");
        for (name, ok) in &self.checks {
            let gap = known_gaps.iter().any(|g| name.starts_with(g));
            assert!(*ok || gap, "{}: unexpected failure: {name}", self.id);
            assert!(
                !(*ok && gap),
                "{}: known gap now passes, update the ledger: {name}",
                self.id
            );
        }
    }
}

fn case1() -> JointSourceDistribution {
    JointSourceDistribution::from_joint(0.091, 0.009, 0.009, 0.891).unwrap()
}

fn case2() -> JointSourceDistribution {
    JointSourceDistribution::from_joint(0.18, 0.02, 0.32, 0.48).unwrap()
}

fn build(a: [f64; 4], gamma_phi: f64, p: JointSourceDistribution) -> CombinedConstellation {
    let g = ChannelGeometry::new(gamma_phi, 1.0).unwrap();
    let (c1, c2) = from_amplitudes(a[0], a[1], a[2], a[3], &g).unwrap();
    combine(&c1, &c2, p)
}

fn random_priors(rng: &mut StdRng) -> JointSourceDistribution {
    let w: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.02..1.0));
    let s: f64 = w.iter().sum();
    JointSourceDistribution::from_joint(w[0] / s, w[1] / s, w[2] / s, w[3] / s).unwrap()
}

fn random_gamma_phi(rng: &mut StdRng) -> f64 {
    match rng.random_range(0..5) {
        0 => 1.0,
        1 => -1.0,
        2 => 0.0,
        _ => rng.random_range(-0.99..0.99),
    }
}

fn random_amplitudes(rng: &mut StdRng) -> [f64; 4] {
    std::array::from_fn(|_| rng.random_range(-2.0..2.0))
}

fn table_design(p: JointSourceDistribution, grid: usize) -> (DesignResult, DesignResult, DesignResult) {
    let s2 = convert_snr(18.0, SnrConvention::TableReproduction, 1.0, 1.0, 1.0);
    let input = DesignInput::new(p, 1.0, 1.0, 1.0, s2).unwrap();
    let spec = GridSpec {
        points: grid,
        ..GridSpec::default()
    };
    (
        individual(&input).unwrap(),
        design_joint(&input).unwrap(),
        numerical_search(&input, spec).unwrap(),
    )
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn c01_table2_reproduction() {
    let start = std::time::Instant::now();
    let (ind, joint, num) = table_design(case1(), 400);
    let elapsed = start.elapsed().as_secs_f64();
    let (i, j, n) = (ind.amplitudes(1.0), joint.amplitudes(1.0), num.amplitudes(1.0));
    let mut v = Verdict::new("C1");
    v.check(
        format!("individual S1 = ({:.10}, {:.10}) vs (-3, 1/3) to 1e-9", i[0], i[1]),
        near(i[0], -3.0, 1e-9) && near(i[1], 1.0 / 3.0, 1e-9),
    );
    v.check(
        format!("joint S2 = ({:.5}, {:.5}) vs (-2.421, -0.678) to 1e-3", j[2], j[3]),
        near(j[2], -2.421, 1e-3) && near(j[3], -0.678, 1e-3),
    );
    v.check(
        format!("numerical S2 = ({:.4}, {:.4}) vs (-2.401, -0.686) to 2e-2", n[2], n[3]),
        near(n[2], -2.401, 2e-2) && near(n[3], -0.686, 2e-2),
    );
    v.check(format!("runtime {elapsed:.1} s < 60 s"), elapsed < 60.0);
    v.finish(&[]);
}

// The published numerical S2 has a higher exact error than the published joint
// design; the search converges to the exact-error minimum instead.
#[test]
fn c02_table3_reproduction() {
    let p = case2();
    let (ind, joint, num) = table_design(p, 400);
    let (i, j, n) = (ind.amplitudes(1.0), joint.amplitudes(1.0), num.amplitudes(1.0));
    let s2 = 10f64.powf(-1.8);
    let err = |a: [f64; 4]| exact_error(&build(a, 1.0, p), s2).unwrap().p_err_exact;
    let mut v = Verdict::new("C2");
    v.check(
        format!("individual S1 = ({:.10}, {:.10}) vs (-2, 0.5) to 1e-9", i[0], i[1]),
        near(i[0], -2.0, 1e-9) && near(i[1], 0.5, 1e-9),
    );
    v.check(
        format!("joint S2 = ({:.5}, {:.5}) vs (-1.408, -0.131) to 1e-3", j[2], j[3]),
        near(j[2], -1.408, 1e-3) && near(j[3], -0.131, 1e-3),
    );
    v.check(
        format!(
            "numerical S2 = ({:.4}, {:.4}) vs (-1.406, -0.151) to 2e-2; P_err here {:.4e}, at the published point {:.4e}",
            n[2],
            n[3],
            err(n),
            err([n[0], n[1], -1.406, -0.151])
        ),
        near(n[2], -1.406, 2e-2) && near(n[3], -0.151, 2e-2),
    );
    v.check(
        "search error at or below the published numerical point",
        err(n) <= err([-2.0, 0.5, -1.406, -0.151]),
    );
    v.finish(&["numerical S2"]);
}

#[test]
fn c03_exact_matches_simulation() {
    let mut rng = StdRng::seed_from_u64(3);
    let (mut inside, mut total) = (0, 0);
    let mut worst = 0.0f64;
    while total < 50 {
        let p = random_priors(&mut rng);
        let g = random_gamma_phi(&mut rng);
        let cc = build(random_amplitudes(&mut rng), g, p);
        if !cc.is_bijective(1e-3) || cc.min_distance() < 0.05 {
            continue;
        }
        let sigma = cc.min_distance() / (2.0 * rng.random_range(0.3..2.5));
        let s2 = sigma * sigma;
        let exact = exact_error(&cc, s2).unwrap().p_err_exact;
        if !(1e-3..=0.2).contains(&exact) {
            continue;
        }
        let sim = simulate(&cc, s2, 10_000_000, 1000 + total as u64).unwrap();
        if sim.contains(exact) {
            inside += 1;
        }
        worst = worst.max((sim.p_hat - exact).abs() / (sim.ci_halfwidth / 3.0));
        total += 1;
    }
    let mut v = Verdict::new("C3");
    v.check(
        format!("{inside}/50 inside the 3-sigma interval (need 48); largest |z| {worst:.2}"),
        inside >= 48,
    );
    v.finish(&[]);
}

#[test]
fn c04_orthogonal_closed_form() {
    let mut v = Verdict::new("C4");
    for (e1, e2) in [(1.0f64, 1.0f64), (2.0, 0.5)] {
        let cc = build(
            [-e1.sqrt(), e1.sqrt(), -e2.sqrt(), e2.sqrt()],
            0.0,
            JointSourceDistribution::uniform(),
        );
        for s2 in [1.0f64, 0.1, 0.01] {
            let exact = exact_error_planar(&cc, s2).unwrap().p_err_exact;
            let closed = closed_form_qam(2.0 * e1.sqrt(), 2.0 * e2.sqrt(), s2.sqrt());
            v.check(
                format!("E=({e1}, {e2}) sigma2={s2}: |{exact:.12e} - {closed:.12e}| <= 1e-10"),
                (exact - closed).abs() <= 1e-10,
            );
        }
    }
    v.finish(&[]);
}

/// Thresholds of the Appendix sign case, `d1 > d2 > 0`, in the order
/// `q11..q13, q21..q23, q31..q33, q41..q43`.
fn appendix_thresholds(d1: f64, d2: f64, p: &JointSourceDistribution, s2: f64) -> [f64; 12] {
    let (p00, p01, p10, p11) = (p.p00(), p.p01(), p.p10(), p.p11());
    let ln = f64::ln;
    [
        (s2 * ln(p00 / p10) + d1 * d1 / 2.0) / d1,
        (s2 * ln(p00 / p01) + d2 * d2 / 2.0) / d2,
        (s2 * ln(p00 / p11) + (d1 + d2).powi(2) / 2.0) / (d1 + d2),
        -(s2 * ln(p10 / p00) + d1 * d1 / 2.0) / d1,
        (s2 * ln(p10 / p11) + d2 * d2 / 2.0) / d2,
        (s2 * ln(p10 / p01) + (d2 - d1).powi(2) / 2.0) / (d2 - d1),
        -(s2 * ln(p01 / p00) + d2 * d2 / 2.0) / d2,
        (s2 * ln(p01 / p11) + d1 * d1 / 2.0) / d1,
        (s2 * ln(p01 / p10) + (d1 - d2).powi(2) / 2.0) / (d1 - d2),
        -(s2 * ln(p11 / p01) + d1 * d1 / 2.0) / d1,
        -(s2 * ln(p11 / p10) + d2 * d2 / 2.0) / d2,
        -(s2 * ln(p11 / p00) + (d1 + d2).powi(2) / 2.0) / (d1 + d2),
    ]
}

#[test]
fn c05_appendix_thresholds() {
    let p = case1();
    let a = [-3.0, 1.0 / 3.0, -2.421, -0.678];
    let (d1, d2) = (a[1] - a[0], a[3] - a[2]);
    assert!(d1 > d2 && d2 > 0.0);
    let cc = build(a, 1.0, p);
    let s2 = 0.3f64;
    let sigma = s2.sqrt();
    let want = appendix_thresholds(d1, d2, &p, s2);

    // the line direction may point either way along the real axis
    let dir = cc.collinear_direction().unwrap().re.signum();
    let table = interval_constraints(&cc, s2).unwrap();
    let order = [
        (
            BitPair::new(0, 0),
            [BitPair::new(1, 0), BitPair::new(0, 1), BitPair::new(1, 1)],
        ),
        (
            BitPair::new(1, 0),
            [BitPair::new(0, 0), BitPair::new(1, 1), BitPair::new(0, 1)],
        ),
        (
            BitPair::new(0, 1),
            [BitPair::new(0, 0), BitPair::new(1, 1), BitPair::new(1, 0)],
        ),
        (
            BitPair::new(1, 1),
            [BitPair::new(0, 1), BitPair::new(1, 0), BitPair::new(0, 0)],
        ),
    ];
    let mut got = Vec::new();
    for (uv, competitors) in order {
        for lm in competitors {
            let c = table[uv.index()].iter().find(|(b, _)| *b == lm).unwrap().1;
            // express as a bound on Re[N]; `true` marks an upper bound
            got.push(match c {
                IntervalConstraint::Upper(t) => (dir * t, dir > 0.0),
                IntervalConstraint::Lower(t) => (dir * t, dir < 0.0),
                other => panic!("unexpected {other:?}"),
            });
        }
    }
    let upper = [
        true, true, true, false, true, false, false, true, true, false, false, false,
    ];
    let worst = (0..12).map(|k| (got[k].0 - want[k]).abs()).fold(0.0, f64::max);
    let sides = (0..12).all(|k| got[k].1 == upper[k]);

    let w = want;
    let band = |lo: f64, hi: f64| if lo < hi { q(lo / sigma) - q(hi / sigma) } else { 0.0 };
    let p_c = p.p00() * q(-w[0].min(w[1]).min(w[2]) / sigma)
        + p.p10() * band(w[3].max(w[5]), w[4])
        + p.p01() * band(w[6], w[7].min(w[8]))
        + p.p11() * q(w[9].max(w[10]).max(w[11]) / sigma);
    let report = exact_error(&cc, s2).unwrap();
    let sim = simulate(&cc, s2, 100_000_000, 5).unwrap();

    let mut v = Verdict::new("C5");
    v.check(
        format!("twelve thresholds within 1e-12 (largest deviation {worst:.2e})"),
        worst <= 1e-12,
    );
    v.check("every threshold bounds Re[N] from the Appendix side", sides);
    v.check("collinear path used", report.method == Method::Collinear);
    v.check(
        format!(
            "P_err {:.10e} vs Appendix formula {:.10e}",
            report.p_err_exact,
            1.0 - p_c
        ),
        (report.p_err_exact - (1.0 - p_c)).abs() <= 1e-12,
    );
    v.check(
        format!(
            "10^8 trials: {:.6e} ± {:.2e} contains {:.6e}",
            sim.p_hat, sim.ci_halfwidth, report.p_err_exact
        ),
        sim.contains(report.p_err_exact),
    );
    v.finish(&[]);
}

#[test]
fn c06_union_bound_ordering() {
    let mut rng = StdRng::seed_from_u64(6);
    let levels = [0.5, 1.0, 2.0, 5.0, 15.0];
    let (mut violations, mut ratio_outside, mut bijective, mut evaluated) = (0, 0, 0, 0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..1000 {
        let p = random_priors(&mut rng);
        let g = random_gamma_phi(&mut rng);
        let cc = build(random_amplitudes(&mut rng), g, p);
        let dmin = cc.min_distance();
        let is_bij = cc.is_bijective(BIJECTIVITY_TOLERANCE) && dmin > 1e-3;
        for (k, z) in levels.iter().enumerate() {
            let scale = if is_bij { dmin } else { cc.diameter() };
            let s2 = (scale / (2.0 * z)).powi(2);
            let Ok(report) = exact_error(&cc, s2) else { continue };
            evaluated += 1;
            let exact = report.p_err_exact;
            let ub = union_bound(&cc, s2);
            if ub < exact * (1.0 - 1e-9) {
                violations += 1;
            }
            if k == levels.len() - 1 && is_bij {
                bijective += 1;
                let r = ub / exact;
                lo = lo.min(r);
                hi = hi.max(r);
                if !(1.0 - 1e-9..=1.1).contains(&r) {
                    ratio_outside += 1;
                }
            }
        }
    }
    let mut v = Verdict::new("C6");
    v.check(
        format!("{evaluated} evaluations, {violations} with union < exact"),
        violations == 0 && evaluated >= 4500,
    );
    v.check(
        format!("{bijective} bijective at the smallest sigma2: ratio in [{lo:.6}, {hi:.6}], {ratio_outside} outside [1, 1.1]"),
        ratio_outside == 0,
    );
    v.finish(&[]);
}

// Separations of the unit-energy designs the table is used for, with every
// sign pattern and both length orders.
#[test]
fn c07_table1_asymptotics() {
    let mut v = Verdict::new("C7");
    let lengths = [(10.0 / 3.0, 1.743), (2.5, 1.277), (2.0, 1.0)];
    let priors = [case1(), case2(), JointSourceDistribution::uniform()];
    for case in Table1Case::ALL {
        let (mut worst, mut n) = (0.0f64, 0);
        for p in priors {
            for snr in [18.0, 20.0, 24.0] {
                let s2 = convert_snr(snr, SnrConvention::TableReproduction, 1.0, 1.0, 1.0);
                for (l1, l2) in lengths.iter().flat_map(|&(a, b)| [(a, b), (b, a)]) {
                    for (s1, s2sign) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        let (d1, d2) = (s1 * l1, s2sign * l2);
                        if Table1Case::classify(d1, d2) != Some(case) {
                            continue;
                        }
                        let cc = build([0.0, d1, 0.0, d2], 1.0, p);
                        let exact = exact_error(&cc, s2).unwrap().p_correct(&cc);
                        let approx = table1_correct_prob(case, d1, d2, &p, s2.sqrt()).unwrap();
                        worst = worst.max((exact - approx).abs());
                        n += 1;
                    }
                }
            }
        }
        v.check(
            format!("case {case}: {n} points, largest |P~c - Pc| = {worst:.3e} <= 1e-4"),
            n > 0 && worst <= 1e-4,
        );
    }
    v.finish(&[]);
}

#[test]
fn c08_lemma1_oracle() {
    let mut v = Verdict::new("C8");
    for (p, e) in [(0.1f64, 1.0f64), (0.2, 1.0), (0.5, 2.0)] {
        let bound = max_separation_distance(p, e);
        let formula = (e / (p * (1.0 - p))).sqrt();
        let limit = (e / p).sqrt();
        let n = 5000;
        let mut best = 0.0f64;
        let mut count = 0;
        for i in 0..n {
            let a0 = -limit + 2.0 * limit * i as f64 / (n - 1) as f64;
            let a1 = ((e - p * a0 * a0) / (1.0 - p)).max(0.0).sqrt();
            for a1 in [a1, -a1] {
                assert!((p * a0 * a0 + (1.0 - p) * a1 * a1 - e).abs() < 1e-9);
                best = best.max((a1 - a0).abs());
                count += 1;
            }
        }
        v.check(
            format!("(p, E) = ({p}, {e}): {count} constellations, largest separation {best:.9} <= {formula:.9}"),
            best <= formula + 1e-9 && count >= 10_000 && (bound - formula).abs() < 1e-12 && formula - best < 1e-3,
        );
    }
    v.finish(&[]);
}

/// SNR at which the exact error of `scheme` (redesigned at each noise level) reaches 1e-5.
fn snr_at_1e5(preset: Preset, scheme: Scheme, gamma_phi: f64) -> f64 {
    let c = preset.config();
    let priors = c.priors().unwrap();
    let conv = c.convention.unwrap();
    let curve = |snr: f64| {
        let s2 = convert_snr(snr, conv, c.e1, c.e2, gamma_phi);
        let input = DesignInput::new(priors, c.e1, c.e2, gamma_phi, s2)?;
        let d = scheme.design(&input, GridSpec::default())?;
        Ok(exact_error(&d.combined(priors), s2)?.p_err_exact)
    };
    snr_for_error(curve, 1e-5, 0.0, 50.0).unwrap()
}

// Case 2 at γφ = 0.924 reaches 1.6 dB; the exhaustive search reaches about 1.9 dB,
// so the stated 2 dB is not attainable under the exact error.
#[test]
fn c09_figure_claims() {
    let mut v = Verdict::new("C9");

    let c = Preset::Fig4.config();
    let p = c.priors().unwrap();
    let mut ordered = true;
    let mut worst_snr = None;
    for k in 0..=40 {
        let snr = 10.0 + 0.5 * k as f64;
        let s2 = convert_snr(snr, c.convention.unwrap(), 1.0, 1.0, 1.0);
        let input = DesignInput::new(p, 1.0, 1.0, 1.0, s2).unwrap();
        let e = |d: DesignResult| exact_error(&d.combined(p), s2).unwrap().p_err_exact;
        if e(design_joint(&input).unwrap()) > e(individual(&input).unwrap()) {
            ordered = false;
            worst_snr.get_or_insert(snr);
        }
    }
    v.check(
        format!("Fig 4: joint <= individual on 10..30 dB (first violation {worst_snr:?})"),
        ordered,
    );

    let gap = snr_at_1e5(Preset::Fig9, Scheme::Individual, 1.0) - snr_at_1e5(Preset::Fig9, Scheme::Joint, 1.0);
    v.check(
        format!("Fig 9: gap at 1e-5 = {gap:.2} dB, within 3 ± 0.5"),
        (gap - 3.0).abs() <= 0.5,
    );

    let g6 = snr_at_1e5(Preset::Fig6, Scheme::Individual, 0.924) - snr_at_1e5(Preset::Fig6, Scheme::Joint, 0.924);
    v.check(format!("Case 1, gamma_phi 0.924: gain {g6:.2} dB >= 1"), g6 >= 1.0);
    let g7 = snr_at_1e5(Preset::Fig7, Scheme::Individual, 0.924) - snr_at_1e5(Preset::Fig7, Scheme::Joint, 0.924);
    v.check(format!("Case 2, gamma_phi 0.924: gain {g7:.2} dB >= 2"), g7 >= 2.0);
    v.finish(&["Case 2, gamma_phi 0.924"]);
}

#[cfg(feature = "parallel")]
#[test]
fn c10_worker_determinism() {
    let mut v = Verdict::new("C10");
    let configs = [
        (build([-3.0, 1.0 / 3.0, -2.421, -0.678], 1.0, case1()), 0.2),
        (build([-2.0, 0.5, -1.408, -0.131], 0.924, case2()), 0.1),
        (
            build([-1.0, 1.0, -1.0, 1.0], 1.0, JointSourceDistribution::uniform()),
            0.05,
        ),
    ];
    for (i, (cc, s2)) in configs.iter().enumerate() {
        let counts: Vec<u64> = [1, 4, 16]
            .iter()
            .map(|&w| {
                simulate_with_workers(cc, *s2, 1_000_003, 77 + i as u64, w)
                    .unwrap()
                    .errors
            })
            .collect();
        v.check(
            format!("configuration {i}: errors {counts:?} for 1, 4, 16 workers"),
            counts.windows(2).all(|w| w[0] == w[1]),
        );
    }
    v.finish(&[]);
}

// Monte-Carlo confirmation near 1e-6, half a billion trials per point:
// `cargo test --release --test acceptance -- --ignored`
#[test]
#[ignore]
fn long_monte_carlo_at_low_error_rates() {
    let mut v = Verdict::new("long-MC");
    for (preset, gamma_phi) in [(Preset::Fig5, 1.0), (Preset::Fig7, 0.924)] {
        let c = preset.config();
        let p = c.priors().unwrap();
        let conv = c.convention.unwrap();
        let design = |snr: f64| {
            let s2 = convert_snr(snr, conv, 1.0, 1.0, gamma_phi);
            let input = DesignInput::new(p, 1.0, 1.0, gamma_phi, s2).unwrap();
            (design_joint(&input).unwrap().combined(p), s2)
        };
        let snr = snr_for_error(
            |snr| {
                let (cc, s2) = design(snr);
                exact_error(&cc, s2).map(|r| r.p_err_exact)
            },
            2e-6,
            0.0,
            40.0,
        )
        .unwrap();
        let (cc, s2) = design(snr);
        let exact = exact_error(&cc, s2).unwrap().p_err_exact;
        let sim = simulate(&cc, s2, 500_000_000, 9).unwrap();
        v.check(
            format!(
                "{preset} joint at {snr:.2} dB: {:.4e} ± {:.1e} vs exact {exact:.4e}",
                sim.p_hat, sim.ci_halfwidth
            ),
            sim.contains(exact),
        );
    }
    v.finish(&[]);
}
