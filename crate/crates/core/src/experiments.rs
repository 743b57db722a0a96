//! Scaling experiments: maximal/Sobolev ratios over an R-sequence, fitted
//! log-log slopes, and zero-crossing sweeps in s.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curves::{CurveKind, CurveSpec};
use crate::error::{domain, Error, Result};
use crate::exponents::{Regime, Smoothness};
use crate::initial_data::{self, Family, FrequencyProfile};
use crate::maximal::{self, TimeGrid, Window};
use crate::propagator::Propagator;
use crate::quadrature::QuadratureSpec;
use crate::report::{SCHEMA_VERSION, TOOL_VERSION};

/// Slope tolerance of the consistency verdict.
pub const VERDICT_TOL: f64 = 0.15;

pub fn default_r_values() -> Vec<f64> {
    (5..=10).map(|k| 2f64.powi(k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimePlan {
    pub points_per_octave: u32,
    /// Octaves searched on each side of the critical-time range.
    pub margin_octaves: u32,
    pub local_refinement: bool,
}

impl Default for TimePlan {
    fn default() -> Self {
        TimePlan {
            points_per_octave: 8,
            margin_octaves: 3,
            local_refinement: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub family: Family,
    pub regime: Regime,
    pub delta: f64,
    #[serde(default)]
    pub s: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_r_values")]
    pub r_values: Vec<f64>,
    /// Window constant; calibrated when absent.
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default = "default_x_points")]
    pub x_points: usize,
    #[serde(default)]
    pub time: TimePlan,
    #[serde(default)]
    pub quad: QuadratureSpec,
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_x_points() -> usize {
    256
}

impl ExperimentPlan {
    pub fn new(family: Family, d: u32, alpha: f64, delta: f64, s: f64) -> Result<Self> {
        let plan = ExperimentPlan {
            family,
            regime: Regime::schrodinger(d, alpha)?,
            delta,
            s,
            epsilon: default_epsilon(),
            r_values: default_r_values(),
            c: None,
            x_points: default_x_points(),
            time: TimePlan::default(),
            quad: QuadratureSpec::default(),
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn d(&self) -> usize {
        self.regime.d as usize
    }

    pub fn alpha(&self) -> f64 {
        self.regime.alpha
    }

    pub fn validate(&self) -> Result<()> {
        self.regime.validate()?;
        self.quad.validate()?;
        if self.regime.m != 2.0 {
            return Err(domain("scaling experiments use m = 2"));
        }
        let dmax = self.regime.delta_max();
        if !(self.delta >= 0.0 && self.delta < dmax) {
            return Err(domain(format!("delta = {} not in [0, {dmax})", self.delta)));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(domain("s must be finite and >= 0"));
        }
        if !(self.epsilon >= 0.0 && self.epsilon < 1.0) {
            return Err(domain("epsilon must lie in [0, 1)"));
        }
        if self.r_values.len() < 4 {
            return Err(domain("R-sequence needs at least 4 values"));
        }
        if self.r_values.iter().any(|r| !(*r >= 1.0 && r.is_finite())) {
            return Err(domain("R values must be finite and >= 1"));
        }
        if self.r_values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain("R-sequence must be strictly increasing"));
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(domain("c must be positive"));
            }
        }
        if self.x_points < 2 * maximal::MIN_CELLS_PER_RADIUS {
            return Err(domain(format!(
                "x_points must be at least {}",
                2 * maximal::MIN_CELLS_PER_RADIUS
            )));
        }
        if self.time.points_per_octave == 0 {
            return Err(domain("points_per_octave must be >= 1"));
        }
        let (a, d) = (self.alpha(), self.d());
        let ok = match self.family {
            Family::BumpDilated => d == 1 && a < 0.5 && self.regime.smoothness == Smoothness::Holder,
            Family::BumpModulated => d == 1 && a >= 0.25,
            Family::BumpTensor => a >= 0.5 && d <= 3,
            Family::IndicatorBand => d == 1 && a <= 0.5,
            Family::Bourgain => a >= 0.5 && d <= 2,
            Family::AnnulusBump | Family::GaussianLike => false,
        };
        if !ok {
            return Err(domain(format!(
                "{} is not a scaling family for d = {d}, alpha = {a}",
                self.family.name()
            )));
        }
        Ok(())
    }

    pub fn curve(&self) -> Result<CurveSpec> {
        let kind = match self.family {
            Family::IndicatorBand => CurveKind::PlusShift,
            _ => CurveKind::MinusShift,
        };
        CurveSpec::new(kind, self.alpha(), self.d())
    }

    pub fn profile(&self, r: f64) -> Result<FrequencyProfile> {
        FrequencyProfile::build(self.family, r, self.epsilon, self.d())
    }

    pub fn window(&self, c: f64, r: f64) -> Result<Window> {
        let n = self.x_points;
        let d = self.d();
        let a = self.alpha();
        let (lo, hi) = match self.family {
            Family::BumpDilated => (0.5 * c * r.powf(-2.0 * a), c * r.powf(-2.0 * a)),
            Family::BumpTensor => (0.5 * c * r.powf(-1.0 + self.epsilon), c * r.powf(-1.0 + self.epsilon)),
            Family::BumpModulated => (0.5 * c, c),
            Family::IndicatorBand => (-c, c),
            Family::Bourgain => (-c, -0.5 * c),
            _ => return Err(Error::Unsupported("no window for this family".into())),
        };
        let mut w = Window::interval(lo, hi, n);
        for _ in 1..d {
            w.lo.push(0.0);
            w.hi.push(c);
            w.points.push(n);
        }
        Ok(w)
    }

    /// Largest power of two keeping every window of the plan inside B(0,1).
    pub fn c_start(&self) -> f64 {
        let r0 = self.r_values[0];
        let a = self.alpha();
        let d = self.d() as f64;
        let bound = match self.family {
            Family::BumpDilated => r0.powf(2.0 * a),
            Family::BumpTensor => r0.powf(1.0 - self.epsilon),
            _ => 1.0,
        };
        let bound = if d > 1.0 { bound.min(1.0 / d.sqrt()) } else { bound };
        2f64.powf(bound.log2().floor())
    }

    /// Critical times at x; for the tensor family the true stationary time is added.
    pub fn critical_times(&self, c: f64, r: f64, x: &[f64]) -> Result<Vec<f64>> {
        let curve = self.curve()?;
        let mut ts = vec![maximal::critical_time(self.family, &curve, r, self.epsilon, x, c)?];
        if self.family == Family::BumpTensor {
            if let Ok(t) = maximal::stationary_time(&curve, -r.powf(1.0 + self.epsilon), x, 1.0) {
                ts.push(t);
            }
        }
        ts.retain(|t| *t > 0.0 && *t <= 1.0);
        if ts.is_empty() {
            return Err(Error::Window(format!("no critical time in (0, 1] at x = {x:?}")));
        }
        Ok(ts)
    }

    pub fn time_grid(&self, c: f64, r: f64, x: &[f64]) -> Result<TimeGrid> {
        let ts = self.critical_times(c, r, x)?;
        let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ts.iter().cloned().fold(0.0, f64::max);
        let m = self.time.margin_octaves as f64;
        let j_min = ((-hi.log2()) - m).floor().max(0.0) as i32;
        let j_max = ((-lo.log2()) + m).ceil().max(j_min as f64) as i32;
        Ok(TimeGrid {
            j_min,
            j_max,
            points_per_octave: self.time.points_per_octave,
            injected: ts,
            local_refinement: self.time.local_refinement,
        })
    }
}

/// Exponent of R predicted for the ratio ‖maximal‖/‖f_R‖_{H^s}.
pub fn predicted_slope(family: Family, regime: &Regime, delta: f64, s: f64, epsilon: f64) -> Result<f64> {
    regime.validate()?;
    let a = regime.alpha;
    let d = regime.d as f64;
    match family {
        Family::Bourgain => Ok(delta + d / (2.0 * (d + 1.0)) - s),
        Family::BumpTensor => Ok(2.0 * delta + epsilon / 2.0 - (1.0 + epsilon) * s),
        Family::BumpDilated => Ok(2.0 * delta - a - s + 0.5),
        Family::BumpModulated => Ok(2.0 * delta - 2.0 * s + 0.5),
        Family::IndicatorBand => Ok(delta / a - s),
        _ => Err(domain(format!("{} has no predicted slope", family.name()))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
}

/// Ordinary least squares of ln y on ln x.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(domain("power-law fit needs at least 3 paired samples"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(domain("power-law fit needs positive finite samples"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(domain("power-law fit needs distinct x values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(Fit {
        slope,
        stderr,
        intercept,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub r: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RDiagnostic {
    pub r: f64,
    pub numerator: f64,
    pub sobolev_norm: f64,
    pub window_lo: Vec<f64>,
    pub window_hi: Vec<f64>,
    pub argmax_t_min: f64,
    pub argmax_t_median: f64,
    pub argmax_t_max: f64,
    pub max_nodes: usize,
    /// Fraction of window points whose sup is at least a quarter of the field maximum.
    pub large_set_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub plan: ExperimentPlan,
    pub c: f64,
    pub samples: Vec<Sample>,
    pub fit: Fit,
    pub predicted_slope: f64,
    pub verdict: Verdict,
    pub diagnostics: Vec<RDiagnostic>,
}

/// Numerator of the ratio for one R, with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Numerator {
    pub value: f64,
    pub diagnostic: RDiagnostic,
}

/// Source of the two sides of the ratio. The pipeline implementation runs
/// the full computation; tests substitute synthetic values.
pub trait RatioSource: Sync {
    fn calibrate(&self, plan: &ExperimentPlan) -> Result<f64>;
    fn numerator(&self, plan: &ExperimentPlan, c: f64, r: f64) -> Result<Numerator>;
    fn sobolev(&self, plan: &ExperimentPlan, r: f64, s: f64) -> Result<f64>;
}

pub struct Pipeline;

impl RatioSource for Pipeline {
    fn calibrate(&self, plan: &ExperimentPlan) -> Result<f64> {
        calibrate(plan).map(|c| c.c)
    }

    fn numerator(&self, plan: &ExperimentPlan, c: f64, r: f64) -> Result<Numerator> {
        let profile = plan.profile(r)?;
        let prop = Propagator::new(&profile, &plan.curve()?, 2.0, &plan.quad)?;
        let window = plan.window(c, r)?;
        let field = maximal::maximal_field(&prop, plan.delta, &window, |x| plan.time_grid(c, r, x))?;
        let value = maximal::l2_over_ball(&field)?;
        let mut ts = field.argmax_times.clone();
        ts.sort_by(f64::total_cmp);
        let peak = field.sup_values.iter().cloned().fold(0.0, f64::max);
        let large = field.sup_values.iter().filter(|v| **v >= 0.25 * peak).count();
        Ok(Numerator {
            value,
            diagnostic: RDiagnostic {
                r,
                numerator: value,
                sobolev_norm: f64::NAN,
                window_lo: window.lo.clone(),
                window_hi: window.hi.clone(),
                argmax_t_min: ts[0],
                argmax_t_median: ts[ts.len() / 2],
                argmax_t_max: ts[ts.len() - 1],
                max_nodes: field.max_nodes,
                large_set_fraction: large as f64 / field.sup_values.len() as f64,
            },
        })
    }

    fn sobolev(&self, plan: &ExperimentPlan, r: f64, s: f64) -> Result<f64> {
        initial_data::sobolev_norm(&plan.profile(r)?, s, &plan.quad)
    }
}

/// Per-R failure with the diagnostics gathered so far.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub error: Error,
    pub r: Option<f64>,
    pub partial: Vec<RDiagnostic>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.r {
            Some(r) => write!(f, "run failed at R = {r}: {}", self.error),
            None => write!(f, "run failed: {}", self.error),
        }
    }
}

impl std::error::Error for RunFailure {}

impl From<Error> for RunFailure {
    fn from(error: Error) -> Self {
        RunFailure {
            error,
            r: None,
            partial: Vec::new(),
        }
    }
}

pub fn run(plan: &ExperimentPlan) -> std::result::Result<ScalingReport, RunFailure> {
    run_with(plan, &Pipeline)
}

fn numerators(
    plan: &ExperimentPlan,
    source: &dyn RatioSource,
) -> std::result::Result<(f64, Vec<Numerator>), RunFailure> {
    plan.validate()?;
    let c = match plan.c {
        Some(c) => c,
        None => source.calibrate(plan)?,
    };
    let mut out: Vec<Numerator> = Vec::with_capacity(plan.r_values.len());
    for &r in &plan.r_values {
        match source.numerator(plan, c, r) {
            Ok(n) => out.push(n),
            Err(error) => {
                return Err(RunFailure {
                    error,
                    r: Some(r),
                    partial: out.into_iter().map(|n| n.diagnostic).collect(),
                })
            }
        }
    }
    Ok((c, out))
}

fn assemble(
    plan: &ExperimentPlan,
    source: &dyn RatioSource,
    c: f64,
    nums: &[Numerator],
    s: f64,
) -> std::result::Result<ScalingReport, RunFailure> {
    let mut samples = Vec::with_capacity(nums.len());
    let mut diagnostics = Vec::with_capacity(nums.len());
    for n in nums {
        let r = n.diagnostic.r;
        let sob = source.sobolev(plan, r, s).map_err(|error| RunFailure {
            error,
            r: Some(r),
            partial: diagnostics.clone(),
        })?;
        let mut diag = n.diagnostic.clone();
        diag.sobolev_norm = sob;
        diagnostics.push(diag);
        samples.push(Sample { r, ratio: n.value / sob });
    }
    let rs: Vec<f64> = samples.iter().map(|p| p.r).collect();
    let ratios: Vec<f64> = samples.iter().map(|p| p.ratio).collect();
    let fit = fit_power_law(&rs, &ratios).map_err(|error| RunFailure {
        error,
        r: None,
        partial: diagnostics.clone(),
    })?;
    let predicted = predicted_slope(plan.family, &plan.regime, plan.delta, s, plan.epsilon)?;
    let verdict = if (fit.slope - predicted).abs() <= VERDICT_TOL {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    let mut echo = plan.clone();
    echo.s = s;
    Ok(ScalingReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        plan: echo,
        c,
        samples,
        fit,
        predicted_slope: predicted,
        verdict,
        diagnostics,
    })
}

pub fn run_with(plan: &ExperimentPlan, source: &dyn RatioSource) -> std::result::Result<ScalingReport, RunFailure> {
    let (c, nums) = numerators(plan, source)?;
    assemble(plan, source, c, &nums, plan.s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub s: f64,
    pub slope: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub plan: ExperimentPlan,
    pub c: f64,
    pub points: Vec<SweepPoint>,
    /// s at which the fitted slope crosses zero (linear interpolation).
    pub crossing: Option<f64>,
    /// Threshold s(δ) of the plan's regime, when a law covers it.
    pub threshold: Option<f64>,
    pub reports: Vec<ScalingReport>,
}

/// First sign change of `ys` along `xs`, by linear interpolation.
pub fn zero_crossing(xs: &[f64], ys: &[f64]) -> Option<f64> {
    for i in 1..xs.len().min(ys.len()) {
        let (y0, y1) = (ys[i - 1], ys[i]);
        if y0 == 0.0 {
            return Some(xs[i - 1]);
        }
        if y0.signum() != y1.signum() {
            return Some(xs[i - 1] + (xs[i] - xs[i - 1]) * y0 / (y0 - y1));
        }
    }
    ys.last().filter(|y| **y == 0.0).and(xs.last().copied())
}

pub fn sharpness_sweep(plan: &ExperimentPlan, s_values: &[f64]) -> std::result::Result<SweepReport, RunFailure> {
    sharpness_sweep_with(plan, s_values, &Pipeline)
}

/// Runs the plan at every s, computing the maximal-function side once.
pub fn sharpness_sweep_with(
    plan: &ExperimentPlan,
    s_values: &[f64],
    source: &dyn RatioSource,
) -> std::result::Result<SweepReport, RunFailure> {
    if s_values.is_empty() {
        return Err(domain("sweep needs at least one s value").into());
    }
    if s_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("s values must be strictly increasing").into());
    }
    let (c, nums) = numerators(plan, source)?;
    let mut reports = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let mut p = plan.clone();
        p.s = s;
        p.validate()?;
        reports.push(assemble(&p, source, c, &nums, s)?);
    }
    let points: Vec<SweepPoint> = reports
        .iter()
        .map(|r| SweepPoint {
            s: r.plan.s,
            slope: r.fit.slope,
            predicted: r.predicted_slope,
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| p.s).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.slope).collect();
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        plan: plan.clone(),
        c,
        crossing: zero_crossing(&xs, &ys),
        threshold: crate::exponents::threshold(&plan.regime, plan.delta).ok(),
        points,
        reports,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationStep {
    pub c: f64,
    pub passed: bool,
    /// Worst value of the lower-bounded quantity over the sampled window.
    pub lower_worst: f64,
    /// Required lower bound.
    pub lower_required: f64,
    /// Worst value of the upper-bounded quantity (|f|), if any.
    pub upper_worst: Option<f64>,
    pub upper_allowed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub c: f64,
    pub r: f64,
    pub steps: Vec<CalibrationStep>,
}

/// Window points sampled by the calibration check.
pub const CALIBRATION_SAMPLES: usize = 9;

/// Checks the family's pointwise inequalities at the given c and R.
pub fn calibration_step(plan: &ExperimentPlan, c: f64, r: f64) -> Result<CalibrationStep> {
    let profile = plan.profile(r)?;
    let prop = Propagator::new(&profile, &plan.curve()?, 2.0, &plan.quad)?;
    let mut w = plan.window(c, r)?;
    w.points = vec![CALIBRATION_SAMPLES; w.lo.len()];
    for j in 1..w.lo.len() {
        w.points[j] = 1;
    }
    let a = plan.alpha();
    let mut lower_worst = f64::INFINITY;
    let mut upper_worst = 0.0f64;
    for x in w.midpoints() {
        let f0 = prop.initial(&x)?;
        if plan.family == Family::IndicatorBand {
            let t0 = plan.critical_times(c, r, &x)?[0];
            let (u, _) = prop.value(&x, t0)?;
            lower_worst = lower_worst.min((u - f0).norm());
        } else {
            let mut best = 0.0f64;
            for t in plan.critical_times(c, r, &x)? {
                best = best.max(prop.value(&x, t)?.0.norm());
            }
            lower_worst = lower_worst.min(best);
            upper_worst = upper_worst.max(f0.norm());
        }
    }
    let peak = if plan.family == Family::Bourgain {
        1.0
    } else {
        1.0 / (2.0 * std::f64::consts::PI)
    };
    Ok(if plan.family == Family::IndicatorBand {
        let need = c.powf(a) / (8.0 * std::f64::consts::PI);
        CalibrationStep {
            c,
            passed: lower_worst >= need,
            lower_worst,
            lower_required: need,
            upper_worst: None,
            upper_allowed: None,
        }
    } else {
        CalibrationStep {
            c,
            passed: lower_worst >= 0.5 * peak && upper_worst <= 0.25 * peak,
            lower_worst,
            lower_required: 0.5 * peak,
            upper_worst: Some(upper_worst),
            upper_allowed: Some(0.25 * peak),
        }
    })
}

/// Halves c from `c_start` until the pointwise inequalities hold at the largest R.
pub fn calibrate(plan: &ExperimentPlan) -> Result<Calibration> {
    plan.validate()?;
    let r = *plan.r_values.last().unwrap();
    let mut c = plan.c_start();
    let mut steps = Vec::new();
    for _ in 0..40 {
        let step = calibration_step(plan, c, r)?;
        let passed = step.passed;
        steps.push(step);
        if passed {
            return Ok(Calibration { c, r, steps });
        }
        c *= 0.5;
    }
    Err(Error::Calibration(format!(
        "no window constant down to {c:.3e} satisfies the pointwise inequalities"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicted_examples() {
        let r = Regime::schrodinger(1, 0.2).unwrap();
        assert!((predicted_slope(Family::BumpDilated, &r, 0.05, 0.0, 0.0).unwrap() - 0.4).abs() < 1e-15);
        let r = Regime::schrodinger(1, 0.25).unwrap();
        assert!((predicted_slope(Family::IndicatorBand, &r, 0.1, 0.0, 0.0).unwrap() - 0.4).abs() < 1e-15);
        let r = Regime::schrodinger(1, 0.5).unwrap();
        assert_eq!(predicted_slope(Family::BumpModulated, &r, 0.0, 0.25, 0.0).unwrap(), 0.0);
        assert!(predicted_slope(Family::GaussianLike, &r, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn crossing_interpolates() {
        assert_eq!(zero_crossing(&[0.0, 1.0], &[1.0, -1.0]), Some(0.5));
        assert_eq!(zero_crossing(&[0.0, 1.0], &[1.0, 2.0]), None);
    }

    #[test]
    fn plan_validation() {
        assert!(ExperimentPlan::new(Family::BumpModulated, 1, 0.5, 0.6, 0.0).is_err());
        assert!(ExperimentPlan::new(Family::BumpModulated, 1, 0.5, 0.1, 0.0).is_ok());
        let mut p = ExperimentPlan::new(Family::BumpModulated, 1, 0.5, 0.1, 0.0).unwrap();
        p.r_values = vec![32.0, 64.0, 64.0, 128.0];
        assert!(p.validate().is_err());
        p.r_values = vec![32.0, 64.0, 128.0];
        assert!(p.validate().is_err());
    }

    #[test]
    fn window_constants_start_inside_the_ball() {
        let p = ExperimentPlan::new(Family::BumpDilated, 1, 0.2, 0.05, 0.0).unwrap();
        assert_eq!(p.c_start(), 4.0);
        let p = ExperimentPlan::new(Family::BumpTensor, 1, 0.5, 0.1, 0.0).unwrap();
        assert_eq!(p.c_start(), 16.0);
        let p = ExperimentPlan::new(Family::BumpModulated, 1, 0.5, 0.1, 0.0).unwrap();
        assert_eq!(p.c_start(), 1.0);
    }
}
