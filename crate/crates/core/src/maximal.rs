//! Rate-weighted maximal functions sup_t |U_γ f(x,t) − f(x)|/t^δ and friends.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{CurveKind, CurveSpec};
use crate::error::{domain, Error, Result};
use crate::initial_data::{Family, FrequencyProfile};
use crate::propagator::Propagator;
use crate::quadrature::QuadratureSpec;

/// Golden-section iterations around a discrete argmax.
pub const GOLDEN_ITERATIONS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub j_min: i32,
    pub j_max: i32,
    #[serde(default = "default_ppo")]
    pub points_per_octave: u32,
    #[serde(default)]
    pub injected: Vec<f64>,
    #[serde(default = "yes")]
    pub local_refinement: bool,
}

fn default_ppo() -> u32 {
    8
}

fn yes() -> bool {
    true
}

impl TimeGrid {
    pub fn new(j_min: i32, j_max: i32) -> Self {
        TimeGrid {
            j_min,
            j_max,
            points_per_octave: 8,
            injected: Vec::new(),
            local_refinement: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.j_min < 0 {
            return Err(domain("j_min must be >= 0 so that t <= 1"));
        }
        if self.j_max < self.j_min {
            return Err(domain("j_max must be >= j_min"));
        }
        if self.points_per_octave == 0 {
            return Err(domain("points_per_octave must be >= 1"));
        }
        if let Some(t) = self.injected.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
            return Err(domain(format!("injected time {t} not in (0, 1]")));
        }
        Ok(())
    }

    /// Sorted, deduplicated grid times merged with injected times.
    pub fn times(&self) -> Vec<f64> {
        let n = (self.j_max - self.j_min) as u32 * self.points_per_octave;
        let mut ts: Vec<f64> = (0..=n)
            .map(|i| 2f64.powf(-(self.j_max as f64) + i as f64 / self.points_per_octave as f64))
            .collect();
        ts.extend(self.injected.iter().copied());
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts
    }

    /// Injected times outside [2^{−j_max}, 2^{−j_min}]; these extend the closure.
    pub fn flagged_injections(&self) -> Vec<f64> {
        let lo = 2f64.powi(-self.j_max);
        let hi = 2f64.powi(-self.j_min);
        self.injected.iter().copied().filter(|t| *t < lo || *t > hi).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSup {
    pub sup: f64,
    pub argmax_t: f64,
    pub max_nodes: usize,
}

/// Maximizes `f` over [a, b] by golden-section search; returns (argmax, max)
/// over every point evaluated, including the endpoints.
pub fn golden_section_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    iterations: usize,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a, b);
    let mut best = (a, f(a)?);
    let fb = f(b)?;
    if fb > best.1 {
        best = (b, fb);
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iterations {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v > best.1 {
                best = (x, v);
            }
        }
    }
    Ok(best)
}

pub fn rate_weighted_sup(prop: &Propagator, delta: f64, x: &[f64], grid: &TimeGrid) -> Result<RateSup> {
    if !(0.0..1.0).contains(&delta) {
        return Err(domain(format!("delta = {delta} not in [0, 1)")));
    }
    grid.validate()?;
    let f0 = prop.initial(x)?;
    let mut max_nodes = 0usize;
    let mut ratio = |t: f64| -> Result<f64> {
        let (u, n) = prop.value(x, t)?;
        max_nodes = max_nodes.max(n);
        Ok((u - f0).norm() / t.powf(delta))
    };
    let ts = grid.times();
    let mut vals = Vec::with_capacity(ts.len());
    for &t in &ts {
        vals.push(ratio(t)?);
    }
    let mut imax = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[imax] {
            imax = i;
        }
    }
    let mut best = (ts[imax], vals[imax]);
    if grid.local_refinement && ts.len() >= 2 {
        let a = ts[imax.saturating_sub(1)];
        let b = ts[(imax + 1).min(ts.len() - 1)];
        let (tau, v) = golden_section_max(|tau| ratio(tau.exp()), a.ln(), b.ln(), GOLDEN_ITERATIONS)?;
        if v > best.1 {
            best = (tau.exp().clamp(a, b), v);
        }
    }
    Ok(RateSup {
        sup: best.1,
        argmax_t: best.0,
        max_nodes,
    })
}

/// Axis-aligned box sampled at cell midpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub points: Vec<usize>,
}

impl Window {
    pub fn interval(lo: f64, hi: f64, n: usize) -> Self {
        Window {
            lo: vec![lo],
            hi: vec![hi],
            points: vec![n],
        }
    }

    pub fn spacing(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(&self.points)
            .map(|((a, b), n)| (b - a) / *n as f64)
            .collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Half-width per coordinate.
    pub fn radius(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (b - a)).collect()
    }

    /// Midpoints in row-major order, first coordinate slowest.
    pub fn midpoints(&self) -> Vec<Vec<f64>> {
        let h = self.spacing();
        let mut out = vec![Vec::new()];
        for j in 0..self.lo.len() {
            let mut next = Vec::with_capacity(out.len() * self.points[j]);
            for p in &out {
                for i in 0..self.points[j] {
                    let mut q = p.clone();
                    q.push(self.lo[j] + h[j] * (i as f64 + 0.5));
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.lo.len();
        if d == 0 || self.hi.len() != d || self.points.len() != d {
            return Err(domain("window dimensions disagree"));
        }
        if self.lo.iter().zip(&self.hi).any(|(a, b)| !(a < b)) {
            return Err(Error::Window("window has empty extent".into()));
        }
        if self.points.iter().any(|n| *n == 0) {
            return Err(domain("window needs at least one point per axis"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalField {
    pub points: Vec<Vec<f64>>,
    pub sup_values: Vec<f64>,
    pub argmax_times: Vec<f64>,
    pub delta: f64,
    pub window: Window,
    pub max_nodes: usize,
}

impl MaximalField {
    pub fn scaled(&self, c: f64) -> Self {
        let mut f = self.clone();
        f.sup_values.iter_mut().for_each(|v| *v *= c.abs());
        f
    }
}

/// Computes the maximal field over the window; `grid_at` builds the time grid
/// used at each point, so per-point critical times can be injected.
pub fn maximal_field(
    prop: &Propagator,
    delta: f64,
    window: &Window,
    grid_at: impl Fn(&[f64]) -> Result<TimeGrid> + Sync,
) -> Result<MaximalField> {
    window.validate()?;
    let points = window.midpoints();
    let sups: Vec<RateSup> = points
        .par_iter()
        .map(|x| rate_weighted_sup(prop, delta, x, &grid_at(x)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(MaximalField {
        sup_values: sups.iter().map(|s| s.sup).collect(),
        argmax_times: sups.iter().map(|s| s.argmax_t).collect(),
        max_nodes: sups.iter().map(|s| s.max_nodes).max().unwrap_or(0),
        points,
        delta,
        window: window.clone(),
    })
}

/// Minimum number of cells per half-width required by `l2_over_ball`.
pub const MIN_CELLS_PER_RADIUS: usize = 64;

pub fn l2_over_ball(field: &MaximalField) -> Result<f64> {
    field.window.validate()?;
    for (h, r) in field.window.spacing().iter().zip(field.window.radius()) {
        if *h > r / MIN_CELLS_PER_RADIUS as f64 * (1.0 + 1e-12) {
            return Err(Error::Resolution(format!(
                "grid spacing {h:.3e} exceeds radius/{MIN_CELLS_PER_RADIUS} = {:.3e}",
                r / MIN_CELLS_PER_RADIUS as f64
            )));
        }
    }
    let expected: usize = field.window.points.iter().product();
    if field.sup_values.len() != expected {
        return Err(domain("field size does not match its window"));
    }
    let cell: f64 = field.window.spacing().iter().product();
    Ok((field.sup_values.iter().map(|v| v * v).sum::<f64>() * cell).sqrt())
}

/// Root of γ₁(x,t) + 2·center·t = 0 in (0, t_hi] by bisection: the time at
/// which a wave packet at frequency `center` passes the curve point.
pub fn stationary_time(curve: &CurveSpec, center: f64, x: &[f64], t_hi: f64) -> Result<f64> {
    let h = |t: f64| -> Result<f64> { Ok(curve.gamma1(x, t)? + 2.0 * center * t) };
    let t_hi = t_hi.min(1.0);
    let (h0, h1) = (h(0.0)?, h(t_hi)?);
    if h0 == 0.0 {
        return Err(Error::Window("stationary point at t = 0".into()));
    }
    if h0.signum() == h1.signum() {
        return Err(Error::Window(format!(
            "no sign change of the stationarity equation on (0, {t_hi:.3e}] at x = {:?}",
            x
        )));
    }
    let (mut lo, mut hi) = (0.0, t_hi);
    let s0 = h0.signum();
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid)?.signum() == s0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Per-family critical time at which |U_γ f − f| is of order one.
pub fn critical_time(
    family: Family,
    curve: &CurveSpec,
    r: f64,
    epsilon: f64,
    x: &[f64],
    c: f64,
) -> Result<f64> {
    let a = curve.alpha;
    match family {
        Family::BumpDilated => {
            if !(x[0] > 0.0) {
                return Err(Error::Window("bump-dilated needs x > 0".into()));
            }
            Ok(x[0].powf(1.0 / a))
        }
        Family::BumpTensor => {
            if !(x[0] > 0.0) {
                return Err(Error::Window("bump-tensor needs x1 > 0".into()));
            }
            Ok(x[0] / r.powf(1.0 + epsilon))
        }
        Family::BumpModulated => {
            let bound = c / (r * r);
            let t = stationary_time(curve, -r * r, x, bound)?;
            if !(t > 0.0 && t < bound) {
                return Err(Error::Window("root outside (0, c R^-2)".into()));
            }
            Ok(t)
        }
        Family::IndicatorBand => Ok(c * r.powf(-1.0 / a)),
        Family::Bourgain => {
            if !(x[0] < 0.0) {
                return Err(Error::Window("bourgain window needs x1 < 0".into()));
            }
            stationary_time(curve, r, x, 1.0)
        }
        _ => Err(Error::Unsupported(format!("no critical time for {}", family.name()))),
    }
}

/// Local-in-time maximal estimates on dyadic pieces, by curve regularity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LocalBound {
    /// Lipschitz curves in dimension d: k ≤ j ≤ 2k.
    Lipschitz { d: u32 },
    /// α ∈ [1/2, 1): k ≤ j ≤ 2k.
    UpperHolder { alpha: f64 },
    /// α ∈ (0, 1/4]: 2k ≤ j ≤ k/α.
    LowerHolder { alpha: f64 },
    /// α ∈ (1/4, 1/2): k ≤ j ≤ k/α.
    MiddleHolder { alpha: f64 },
}

impl LocalBound {
    pub fn alpha(&self) -> f64 {
        match *self {
            LocalBound::Lipschitz { .. } => 1.0,
            LocalBound::UpperHolder { alpha } | LocalBound::LowerHolder { alpha } | LocalBound::MiddleHolder { alpha } => alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            LocalBound::Lipschitz { d } => d >= 1,
            LocalBound::UpperHolder { alpha } => (0.5..1.0).contains(&alpha),
            LocalBound::LowerHolder { alpha } => alpha > 0.0 && alpha <= 0.25,
            LocalBound::MiddleHolder { alpha } => alpha > 0.25 && alpha < 0.5,
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("invalid parameters for {self:?}")))
        }
    }

    /// Inclusive j-range for scale k.
    pub fn j_range(&self, k: i32) -> (i32, i32) {
        let top = |a: f64| (k as f64 / a + 1e-9).floor() as i32;
        match *self {
            LocalBound::Lipschitz { .. } | LocalBound::UpperHolder { .. } => (k, 2 * k),
            LocalBound::LowerHolder { alpha } => (2 * k, top(alpha)),
            LocalBound::MiddleHolder { alpha } => (k, top(alpha)),
        }
    }
}

/// Right-hand side 2^{…} of the local estimate (ε = 0), for ‖f‖₂ = 1.
pub fn lemma_bound(sel: &LocalBound, k: i32, j: i32) -> Result<f64> {
    sel.validate()?;
    if k < 1 {
        return Err(Error::Range("k must be >= 1".into()));
    }
    let (lo, hi) = sel.j_range(k);
    if j < lo || j > hi {
        return Err(Error::Range(format!("j = {j} outside [{lo}, {hi}] for k = {k}")));
    }
    let (k, jf) = (k as f64, j as f64);
    let e = match *sel {
        LocalBound::Lipschitz { d } => {
            let d = d as f64;
            (2.0 * k - jf) * d / (2.0 * (d + 1.0))
        }
        LocalBound::UpperHolder { .. } => (2.0 * k - jf) / 4.0,
        LocalBound::LowerHolder { alpha } => (k - alpha * jf) / 2.0,
        LocalBound::MiddleHolder { alpha } => {
            if jf <= 4.0 * alpha * k {
                (2.0 * k - jf) / 4.0
            } else if jf <= 2.0 * k {
                (0.5 - alpha) * k
            } else {
                (k - alpha * jf) / 2.0
            }
        }
    };
    Ok(2f64.powf(e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaGrid {
    pub points_per_octave: u32,
    /// Extra octaves below the smallest requested 2^{−j}.
    pub extra_octaves: u32,
    /// Grid cells per 2^{−k}.
    pub cells_per_wavelength: u32,
    /// Half-width, in units of 2^{−k}, of the region around the moving packet
    /// outside which values are below the profile's tail level.
    pub tail: f64,
}

impl Default for LemmaGrid {
    fn default() -> Self {
        LemmaGrid {
            points_per_octave: 8,
            extra_octaves: 8,
            cells_per_wavelength: 8,
            tail: 64.0,
        }
    }
}

/// ‖sup_{0<t<2^{−j}} |U_γ f(·,t)|‖_{L²([−1,1])} for the unit annulus bump at
/// scale k, for every j in `js` at once.
pub fn lemma_empirical_sweep(
    sel: &LocalBound,
    k: i32,
    js: &[i32],
    quad: &QuadratureSpec,
    grid: &LemmaGrid,
) -> Result<Vec<f64>> {
    sel.validate()?;
    if let LocalBound::Lipschitz { d } = sel {
        if *d != 1 {
            return Err(Error::Unsupported("empirical local estimates are one-dimensional".into()));
        }
    }
    if js.is_empty() {
        return Ok(Vec::new());
    }
    for &j in js {
        lemma_bound(sel, k, j)?;
    }
    let profile = FrequencyProfile::annulus_bump(k)?;
    let curve = CurveSpec::new(CurveKind::MinusShift, sel.alpha(), 1)?;
    let prop = Propagator::new(&profile, &curve, 2.0, quad)?;
    let scale = 2f64.powi(-k);
    let h = scale / grid.cells_per_wavelength as f64;
    let n = (2.0 / h).ceil() as usize;
    let h = 2.0 / n as f64;
    let j_lo = *js.iter().min().unwrap();
    let j_hi = *js.iter().max().unwrap();
    let ppo = grid.points_per_octave.max(1);
    let steps = (j_hi - j_lo + grid.extra_octaves as i32) as u32 * ppo;
    // Times strictly below 2^{−j_lo}, then t = 0.
    let mut times: Vec<f64> = (1..=steps).map(|i| 2f64.powf(-(j_lo as f64) - i as f64 / ppo as f64)).collect();
    times.push(0.0);
    let tail = grid.tail * scale;
    let sign = curve.shift_sign();
    let rows: Vec<(f64, usize, usize, Vec<f64>)> = times
        .par_iter()
        .map(|&t| {
            // Packet occupies y ∈ [−2^{k+2} t, −2^k t] in the frame of u; x = y − σ t^α.
            let shift = -sign * curve.shift(t);
            let a = (shift - 2f64.powi(k + 2) * t - tail).max(-1.0);
            let b = (shift + tail).min(1.0);
            if a >= b {
                return Ok((t, 0, 0, Vec::new()));
            }
            let i0 = ((a + 1.0) / h).floor().max(0.0) as usize;
            let i1 = (((b + 1.0) / h).ceil() as usize).min(n);
            let x0 = -1.0 + h * (i0 as f64 + 0.5);
            let vals = prop.line(x0, h, i1 - i0, t)?;
            Ok((t, i0, i1, vals.into_iter().map(|v| v.norm()).collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    js.iter()
        .map(|&j| {
            let cutoff = 2f64.powi(-j);
            let mut sup = vec![0.0f64; n];
            for (t, i0, _, vals) in &rows {
                if *t < cutoff {
                    for (s, v) in sup[*i0..].iter_mut().zip(vals) {
                        *s = s.max(*v);
                    }
                }
            }
            Ok((sup.iter().map(|v| v * v).sum::<f64>() * h).sqrt())
        })
        .collect()
}

pub fn lemma_empirical(sel: &LocalBound, k: i32, j: i32, quad: &QuadratureSpec, grid: &LemmaGrid) -> Result<f64> {
    Ok(lemma_empirical_sweep(sel, k, &[j], quad, grid)?[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CeilingPoint {
    pub j: i32,
    pub t: f64,
    pub ratio: f64,
    pub running_inf: f64,
}

/// Ratios |U_γ f(x*,t) − f(x*)|/t^α along t = 2^{−j}, j = 4..=20.
pub fn rate_ceiling_demo(prop: &Propagator, x_star: &[f64]) -> Result<Vec<CeilingPoint>> {
    if prop.profile.family != Family::GaussianLike {
        return Err(domain("rate-ceiling demonstration uses gaussian-like data"));
    }
    if prop.curve.kind == CurveKind::Straight || prop.curve.is_custom() {
        return Err(domain("rate-ceiling demonstration needs a shifted curve"));
    }
    let alpha = prop.curve.alpha;
    let f0 = prop.initial(x_star)?;
    let mut inf = f64::INFINITY;
    (4..=20)
        .map(|j| {
            let t = 2f64.powi(-j);
            let (u, _) = prop.value(x_star, t)?;
            let ratio = (u - f0).norm() / t.powf(alpha);
            inf = inf.min(ratio);
            Ok(CeilingPoint {
                j,
                t,
                ratio,
                running_inf: inf,
            })
        })
        .collect()
}
