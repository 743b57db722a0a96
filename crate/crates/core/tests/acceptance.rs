//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::Ratio;
use schrate::curves::{CurveKind, CurveSpec};
use schrate::experiments::{self, ExperimentPlan, ScalingReport, SweepReport};
use schrate::exponents::{LawKind, Regime, RegimeLaw, Smoothness};
use schrate::initial_data::{self, Family, FrequencyProfile};
use schrate::maximal::{self, LemmaGrid, LocalBound};
use schrate::propagator::Propagator;
use schrate::quadrature::QuadratureSpec;
use schrate::report::Envelope;

type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Reports produced along the way, re-parsed by the round-trip criterion.
#[derive(Default)]
struct Produced {
    scaling: Vec<ScalingReport>,
    sweeps: Vec<SweepReport>,
}

fn two_pow(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}

/// A representative regime for every law, including the degenerate middle case.
fn atlas() -> Vec<(LawKind, Regime)> {
    let r = |d, a, m, s| Regime::new(d, a, m, s).unwrap();
    use Smoothness::{Holder, Lipschitz};
    vec![
        (LawKind::NonTangential, r(1, 1.0, 2.0, Lipschitz)),
        (LawKind::NonTangential, r(3, 1.0, 2.0, Lipschitz)),
        (LawKind::HolderUpper, r(1, 0.75, 2.0, Holder)),
        (LawKind::HolderLower, r(1, 0.2, 2.0, Holder)),
        (LawKind::HolderMiddle, r(1, 0.3, 2.0, Holder)),
        (LawKind::SubUpper, r(1, 0.75, 0.5, Holder)),
        (LawKind::SubLower, r(1, 0.3, 0.5, Holder)),
        (LawKind::SuperUpper, r(1, 0.8, 1.5, Holder)),
        (LawKind::SuperLower, r(1, 0.1, 3.0, Holder)),
        (LawKind::SuperMiddle, r(1, 0.3, 2.5, Holder)),
        (LawKind::SuperMiddle, r(1, 0.38, 2.4, Holder)),
        (LawKind::SuperTransitional, r(1, 0.55, 1.5, Holder)),
    ]
}

fn criterion_1() -> Outcome {
    let mut worst_jump: f64 = 0.0;
    let mut monotone = true;
    let mut kinds = std::collections::HashSet::new();
    for (kind, regime) in atlas() {
        let law = regime.law().unwrap();
        if law.kind != kind {
            return check(false, format!("{regime:?} dispatched to {:?}, expected {kind:?}", law.kind));
        }
        kinds.insert(kind);
        for w in law.pieces.windows(2) {
            worst_jump = worst_jump.max((w[0].eval(&w[0].end) - w[1].eval(&w[1].start)).abs());
        }
        let n = 1000;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..n {
            let delta = law.delta_max * i as f64 / n as f64;
            let s = law.threshold(&delta).unwrap();
            monotone &= s >= prev;
            prev = s;
        }
    }
    let mut special: f64 = 0.0;
    for i in 0..50 {
        let alpha = 0.5 + 0.49 * i as f64 / 49.0;
        let general = RegimeLaw::from_kind(LawKind::SuperUpper, 1, alpha, 2.0);
        let classical = RegimeLaw::build(1, alpha, 2.0, Smoothness::Holder).unwrap();
        for j in 0..1000 {
            let delta = alpha * j as f64 / 1000.0;
            special = special.max((general.threshold(&delta).unwrap() - classical.threshold(&delta).unwrap()).abs());
        }
    }
    check(
        kinds.len() == 10 && worst_jump <= 1e-12 && monotone && special == 0.0,
        format!(
            "{} laws, max breakpoint jump {worst_jump:.1e}, monotone {monotone}, fractional(m=2) vs classical max diff {special:.1e}",
            kinds.len()
        ),
    )
}

fn corners(law: &RegimeLaw<Q>) -> Vec<(Q, Q)> {
    law.annotations().corners.iter().map(|c| (c.delta, c.s)).collect()
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    for d in 1..=3i64 {
        let law = RegimeLaw::build(d as u32, q(1, 1), q(2, 1), Smoothness::Lipschitz).unwrap();
        let want = vec![(q(d, 2 * (d + 1)), q(d, d + 1))];
        if corners(&law) != want {
            failures.push(format!("non-tangential d={d}"));
        }
    }
    let law = RegimeLaw::build(1, q(3, 4), q(2, 1), Smoothness::Holder).unwrap();
    if corners(&law) != vec![(q(1, 4), q(1, 2))] || law.annotations().intercept != q(1, 4) {
        failures.push("upper Hölder".into());
    }
    let a = q(1, 5);
    let law = RegimeLaw::build(1, a, q(2, 1), Smoothness::Holder).unwrap();
    let ann = law.annotations();
    if ann.intercept != q(1, 2) - a || corners(&law) != vec![(a / 2, q(1, 2))] || ann.ceiling != a {
        failures.push("lower Hölder".into());
    }
    let a = q(3, 10);
    let law = RegimeLaw::build(1, a, q(2, 1), Smoothness::Holder).unwrap();
    let ann = law.annotations();
    let want = vec![(a - q(1, 4), a), (a / 2, q(1, 2))];
    if ann.intercept != q(1, 4) || corners(&law) != want || ann.ceiling != a {
        failures.push("middle Hölder".into());
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "all graph breakpoints match as exact rationals".to_string()
        } else {
            format!("mismatch: {}", failures.join(", "))
        },
    )
}

fn gaussian_closed(amp: f64, c: f64, g: f64, t: f64) -> Complex64 {
    let a = Complex64::new(1.0, -t);
    let b = Complex64::new(2.0 * c, g);
    amp * (PI / a).sqrt() * (b * b / (4.0 * a) - c * c).exp() / (2.0 * PI)
}

fn criterion_3() -> Outcome {
    let quad = QuadratureSpec::default();
    let mut evaluations = 0usize;
    let mut identity = true;
    let mut bourgain_err: f64 = 0.0;
    for fam in [Family::BumpDilated, Family::BumpModulated, Family::BumpTensor, Family::IndicatorBand, Family::Bourgain] {
        let p = FrequencyProfile::build(fam, 256.0, 0.1, 1).unwrap();
        let c = CurveSpec::new(CurveKind::MinusShift, 0.5, 1).unwrap();
        for m in [0.5, 2.0, 3.0] {
            let prop = Propagator::new(&p, &c, m, &quad).unwrap();
            for i in 0..16 {
                let x = -1.0 + 2.0 * (i as f64 + 0.5) / 16.0;
                let s = prop.evaluate(&[x], 0.0).unwrap();
                let direct = initial_data::physical_eval(&p, &[x], &quad).unwrap();
                identity &= s.initial == s.value;
                if fam == Family::Bourgain {
                    // Independent product formula for the physical datum.
                    bourgain_err = bourgain_err.max((s.value - direct).norm());
                } else {
                    identity &= s.value == direct;
                }
                evaluations += 1;
            }
        }
    }
    let mut gauss_err: f64 = 0.0;
    for (center, alpha) in [(0.0, 0.5), (4.0, 0.25), (-3.0, 1.0)] {
        let p = FrequencyProfile::gaussian_like(1, center, 1.0).unwrap();
        let c = CurveSpec::new(CurveKind::MinusShift, alpha, 1).unwrap();
        let prop = Propagator::new(&p, &c, 2.0, &quad).unwrap();
        for i in 0..21 {
            for j in 0..=10 {
                let x = -1.0 + 0.1 * i as f64;
                let t = if j == 0 { 0.0 } else { 2f64.powi(-2 * (j - 1)) };
                let (u, _) = prop.value(&[x], t).unwrap();
                gauss_err = gauss_err.max((u - gaussian_closed(1.0, center, x - t.powf(alpha), t)).norm());
                evaluations += 1;
            }
        }
    }
    let straight = CurveSpec::new(CurveKind::Straight, 1.0, 1).unwrap();
    let base = Propagator::new(&FrequencyProfile::gaussian_like(1, 0.0, 1.0).unwrap(), &straight, 2.0, &quad).unwrap();
    let shift = 6.0;
    let moved = Propagator::new(&FrequencyProfile::gaussian_like(1, shift, 1.0).unwrap(), &straight, 2.0, &quad).unwrap();
    let mut cov_err: f64 = 0.0;
    for i in 0..11 {
        for t in [0.0, 0.01, 0.05, 0.1] {
            let x = -0.5 + 0.1 * i as f64;
            let (a, _) = moved.value(&[x], t).unwrap();
            let (b, _) = base.value(&[x + 2.0 * t * shift], t).unwrap();
            cov_err = cov_err.max((a - Complex64::from_polar(1.0, x * shift + t * shift * shift) * b).norm());
            evaluations += 2;
        }
    }
    check(
        identity && bourgain_err < 1e-12 && gauss_err < 1e-6 && cov_err < 1e-8 && quad.self_check,
        format!(
            "t=0 identity exact {identity} (Bourgain product form within {bourgain_err:.1e}); Gaussian max error {gauss_err:.1e}; covariance max error {cov_err:.1e}; \
             {evaluations} evaluations, each passing the 1e-9 node-doubling check"
        ),
    )
}

fn criterion_4() -> Outcome {
    let quad = QuadratureSpec::default();
    let samples = 16;
    // Modulated bumps.
    let mut plan = ExperimentPlan::new(Family::BumpModulated, 1, 0.5, 0.0, 0.0).unwrap();
    plan.r_values = two_pow(6, 10);
    let c = experiments::calibrate(&plan).unwrap().c;
    let curve = plan.curve().unwrap();
    let (mut worst_u, mut worst_f) = (f64::INFINITY, 0.0f64);
    for &r in &plan.r_values {
        let prop = Propagator::new(&plan.profile(r).unwrap(), &curve, 2.0, &quad).unwrap();
        for i in 0..samples {
            let x = c * (0.5 + 0.5 * (i as f64 + 0.5) / samples as f64);
            let t = maximal::critical_time(Family::BumpModulated, &curve, r, 0.0, &[x], c).unwrap();
            worst_u = worst_u.min(prop.value(&[x], t).unwrap().0.norm());
            worst_f = worst_f.max(prop.initial(&[x]).unwrap().norm());
        }
    }
    let mod_ok = worst_u >= 0.9 / (4.0 * PI) && worst_f <= 1.1 / (8.0 * PI);
    // Indicator bands.
    let mut band = Vec::new();
    let mut band_ok = true;
    for alpha in [0.25, 0.5] {
        let mut plan = ExperimentPlan::new(Family::IndicatorBand, 1, alpha, 0.0, 0.0).unwrap();
        plan.r_values = two_pow(6, 10);
        let c = experiments::calibrate(&plan).unwrap().c;
        let curve = plan.curve().unwrap();
        let mut worst: f64 = f64::INFINITY;
        for &r in &plan.r_values {
            let prop = Propagator::new(&plan.profile(r).unwrap(), &curve, 2.0, &quad).unwrap();
            let t0 = c * r.powf(-1.0 / alpha);
            for i in 0..samples {
                let x = c * (-1.0 + 2.0 * (i as f64 + 0.5) / samples as f64);
                let (u, _) = prop.value(&[x], t0).unwrap();
                worst = worst.min((u - prop.initial(&[x]).unwrap()).norm() / c.powf(alpha));
            }
        }
        band_ok &= worst >= 1.0 / (8.0 * PI);
        band.push(format!("alpha={alpha}: c={c}, min |Uf−f|/c^α = {worst:.4}"));
    }
    check(
        mod_ok && band_ok,
        format!(
            "modulated c={c}: min |Uf(x,t_x)| = {worst_u:.4} (need {:.4}), max |f| = {worst_f:.2e} (allow {:.4}); bands {} (need {:.4})",
            0.9 / (4.0 * PI),
            1.1 / (8.0 * PI),
            band.join("; "),
            1.0 / (8.0 * PI)
        ),
    )
}

fn slope_line(r: &ScalingReport) -> String {
    format!(
        "{} a={} d={} s={}: {:.3}±{:.3} vs {:.3}",
        r.plan.family.name(),
        r.plan.regime.alpha,
        r.plan.delta,
        r.plan.s,
        r.fit.slope,
        r.fit.stderr,
        r.predicted_slope
    )
}

fn criterion_5(out: &mut Produced) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut record = |r: &ScalingReport, lines: &mut Vec<String>| {
        let good = (r.fit.slope - r.predicted_slope).abs() <= experiments::VERDICT_TOL;
        ok &= good;
        lines.push(format!("{}{}", if good { "" } else { "MISS " }, slope_line(r)));
    };
    for delta in [0.0, 0.1] {
        let plan = ExperimentPlan::new(Family::BumpModulated, 1, 0.5, delta, 0.0).unwrap();
        let s_values: &[f64] = if delta == 0.0 { &[0.0, 0.1, 0.2, 0.25, 0.3, 0.4] } else { &[0.0, 0.25] };
        let sweep = experiments::sharpness_sweep(&plan, s_values).unwrap();
        for r in sweep.reports.iter().filter(|r| r.plan.s == 0.0 || r.plan.s == 0.25) {
            record(r, &mut lines);
        }
        out.sweeps.push(sweep);
    }
    let runs = [
        (Family::BumpDilated, 0.2, 0.05),
        (Family::IndicatorBand, 0.25, 0.25 / 2.0 * 0.8),
        (Family::IndicatorBand, 0.5, 0.5 / 2.0 * 0.8),
        (Family::BumpTensor, 0.5, 0.1),
        (Family::Bourgain, 0.5, 0.1),
    ];
    for (fam, alpha, delta) in runs {
        let plan = ExperimentPlan::new(fam, 1, alpha, delta, 0.0).unwrap();
        let r = experiments::run(&plan).unwrap();
        record(&r, &mut lines);
        out.scaling.push(r);
    }
    check(ok, lines.join("; "))
}

fn criterion_6(out: &mut Produced) -> Outcome {
    let modulated = &out.sweeps[0];
    let mod_cross = modulated.crossing.unwrap_or(f64::NAN);
    let plan = ExperimentPlan::new(Family::IndicatorBand, 1, 0.25, 0.125, 0.0).unwrap();
    let band = experiments::sharpness_sweep(&plan, &[0.3, 0.4, 0.5, 0.6, 0.7]).unwrap();
    let band_cross = band.crossing.unwrap_or(f64::NAN);
    let coefficient = |s: &SweepReport| {
        let p = &s.points;
        (p[p.len() - 1].slope - p[0].slope) / (p[p.len() - 1].s - p[0].s)
    };
    let (cm, cb) = (coefficient(modulated), coefficient(&band));
    let ok = (mod_cross - 0.25).abs() <= 0.05 && (band_cross - 0.5).abs() <= 0.05 && (cm + 2.0).abs() <= 0.05 && (cb + 1.0).abs() <= 0.05;
    out.sweeps.push(band);
    check(
        ok,
        format!(
            "modulated δ=0 crossing {mod_cross:.4} (want 0.25), s-coefficient {cm:.4}; band α=1/4 δ=1/8 crossing {band_cross:.4} (want 0.5), s-coefficient {cb:.4}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let quad = QuadratureSpec::default();
    let rs = two_pow(5, 10);
    let eps = 0.1;
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for (fam, label) in [
        (Family::BumpDilated, "dilated"),
        (Family::BumpModulated, "modulated"),
        (Family::BumpTensor, "tensor"),
        (Family::IndicatorBand, "band"),
    ] {
        for s in [0.25, 0.5, 1.0] {
            let norms: Vec<f64> = rs
                .iter()
                .map(|&r| initial_data::sobolev_norm(&FrequencyProfile::build(fam, r, eps, 1).unwrap(), s, &quad).unwrap())
                .collect();
            let fit = experiments::fit_power_law(&rs, &norms).unwrap();
            let want = match fam {
                Family::BumpDilated => s - 0.5,
                Family::BumpModulated => 2.0 * s - 0.5,
                Family::BumpTensor => (1.0 + eps) * s - 0.5,
                _ => s,
            };
            worst = worst.max((fit.slope - want).abs());
            lines.push(format!("{label} s={s}: {:.3}", fit.slope));
        }
    }
    check(worst <= 0.05, format!("max |fitted − expected| = {worst:.4} ({})", lines.join(", ")))
}

fn criterion_8() -> Outcome {
    let quad = QuadratureSpec::default();
    let grid = LemmaGrid::default();
    let mut ok = true;
    let mut lines = Vec::new();
    for (label, sel) in [
        ("upper Hölder α=1/2", LocalBound::UpperHolder { alpha: 0.5 }),
        ("lower Hölder α=1/4", LocalBound::LowerHolder { alpha: 0.25 }),
        ("middle Hölder α=0.3", LocalBound::MiddleHolder { alpha: 0.3 }),
    ] {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        let mut monotone = true;
        for k in [6, 8, 10] {
            let (a, b) = sel.j_range(k);
            let js: Vec<i32> = (a..=b).collect();
            let emp = maximal::lemma_empirical_sweep(&sel, k, &js, &quad, &grid).unwrap();
            monotone &= emp.windows(2).all(|w| w[1] <= w[0]);
            for (j, e) in js.iter().zip(&emp) {
                let ratio = e / maximal::lemma_bound(&sel, k, *j).unwrap();
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        }
        let spread = hi / lo;
        ok &= spread < 10.0 && monotone && lo > 0.0;
        lines.push(format!("{label}: spread {spread:.2}, monotone {monotone}"));
    }
    check(ok, lines.join("; "))
}

fn criterion_9() -> Outcome {
    let quad = QuadratureSpec::default();
    let mut ok = true;
    let mut lines = Vec::new();
    for alpha in [0.25, 0.5] {
        let p = FrequencyProfile::gaussian_like(1, 0.0, 1.0).unwrap();
        let c = CurveSpec::new(CurveKind::MinusShift, alpha, 1).unwrap();
        let prop = Propagator::new(&p, &c, 2.0, &quad).unwrap();
        let pts = maximal::rate_ceiling_demo(&prop, &[0.5]).unwrap();
        let first = pts[0].ratio;
        let floor = pts.last().unwrap().running_inf;
        ok &= floor > 0.0 && floor > 1e-3 * first && pts.len() == 17;
        lines.push(format!("α={alpha}: j=4 ratio {first:.4}, floor {floor:.4}"));
    }
    check(ok, lines.join("; "))
}

fn criterion_10(out: &Produced) -> Outcome {
    let mut plan = ExperimentPlan::new(Family::BumpModulated, 1, 0.5, 0.1, 0.0).unwrap();
    plan.r_values = two_pow(5, 8);
    let in_pool = |n: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        pool.install(|| Envelope::new("scaling", &plan, experiments::run(&plan).unwrap()).unwrap().to_json().unwrap())
    };
    let one = in_pool(1);
    let eight = in_pool(8);
    let identical = one == eight;
    let mut parsed = 0;
    let mut round_trip = true;
    let v: serde_json::Value = serde_json::from_str(&one).unwrap();
    round_trip &= v["schema_version"] == 1 && v["config"]["family"] == "bump-modulated";
    let back: ScalingReport = serde_json::from_value(v["result"].clone()).unwrap();
    round_trip &= back.plan == plan;
    parsed += 1;
    for r in &out.scaling {
        let again: ScalingReport = serde_json::from_str(&serde_json::to_string(r).unwrap()).unwrap();
        round_trip &= &again == r;
        parsed += 1;
    }
    for s in &out.sweeps {
        let again: SweepReport = serde_json::from_str(&serde_json::to_string(s).unwrap()).unwrap();
        round_trip &= &again == s;
        parsed += 1;
    }
    check(
        identical && round_trip,
        format!("1 vs 8 workers byte-identical {identical} ({} bytes); {parsed} reports re-parsed identical {round_trip}", one.len()),
    )
}

fn main() {
    // Ignore libtest flags such as --nocapture passed through by cargo.
    let mut produced = Produced::default();
    let mut failures = 0;
    let mut total = Duration::ZERO;
    let mut report = |n: u32, name: &str, limit: Duration, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        total += took;
        let passed = o.passed && took <= limit;
        if !passed {
            failures += 1;
        }
        println!(
            "{} [{n:>2}] {name} ({:.1}s, limit {}s): {}",
            if passed { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    };
    let secs = Duration::from_secs;
    report(1, "threshold atlas integrity", secs(1), &mut criterion_1);
    report(2, "region-curve breakpoints", secs(1), &mut criterion_2);
    report(3, "propagator correctness", secs(30), &mut criterion_3);
    report(4, "pointwise inequalities", secs(300), &mut criterion_4);
    report(5, "scaling slopes", secs(900), &mut || criterion_5(&mut produced));
    report(6, "sharpness sweeps", secs(900), &mut || criterion_6(&mut produced));
    report(7, "Sobolev-norm scaling", secs(60), &mut criterion_7);
    report(8, "local maximal estimate trends", secs(600), &mut criterion_8);
    report(9, "rate-ceiling demonstration", secs(60), &mut criterion_9);
    report(10, "determinism and round-trip", secs(600), &mut || criterion_10(&produced));
    println!("acceptance: {} of 10 criteria passed in {:.1}s", 10 - failures, total.as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
