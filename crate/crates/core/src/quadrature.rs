//! Composite Gauss–Legendre rules with oscillation-aware node budgets.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Relative tolerance of the node-doubling self-check.
pub const SELF_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub base_nodes: usize,
    pub nodes_per_radian: f64,
    pub panel_order: usize,
    pub max_nodes: usize,
    pub self_check: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            base_nodes: 256,
            nodes_per_radian: 10.0 / (2.0 * std::f64::consts::PI),
            panel_order: 16,
            max_nodes: 1 << 22,
            self_check: true,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.base_nodes < 64 {
            return Err(domain("base_nodes must be at least 64"));
        }
        if self.max_nodes < self.base_nodes {
            return Err(domain("max_nodes must be at least base_nodes"));
        }
        if self.panel_order < 4 {
            return Err(domain("panel_order must be at least 4"));
        }
        if !(self.nodes_per_radian > 0.0 && self.nodes_per_radian.is_finite()) {
            return Err(domain("nodes_per_radian must be positive"));
        }
        Ok(())
    }
}

thread_local! {
    static RULES: RefCell<HashMap<usize, Rc<Vec<(f64, f64)>>>> = RefCell::new(HashMap::new());
}

/// Gauss–Legendre nodes and weights on [−1, 1], sorted by node.
pub fn gauss_legendre(order: usize) -> Rc<Vec<(f64, f64)>> {
    RULES.with(|cache| {
        cache
            .borrow_mut()
            .entry(order)
            .or_insert_with(|| {
                let rule = GaussLegendre::new(order).expect("order >= 2");
                let mut pairs = rule.as_node_weight_pairs().to_vec();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                Rc::new(pairs)
            })
            .clone()
    })
}

/// Real amplitude shapes used by the closed-form profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// amp · g((ξ − center)/width)
    Bump,
    /// amp on [lo, hi]
    Indicator,
    /// amp · exp(−(ξ − center)²)
    Gaussian,
}

/// Optional smooth radial multiplier applied to a component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    None,
    Annulus(i32),
    Low,
}

/// One summand of a one-dimensional factor, supported on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub shape: Shape,
    pub center: f64,
    pub width: f64,
    pub amp: f64,
    pub lo: f64,
    pub hi: f64,
    pub multiplier: Multiplier,
}

impl Component {
    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        if xi < self.lo || xi > self.hi {
            return 0.0;
        }
        let base = match self.shape {
            Shape::Bump => self.amp * crate::bump::bump_eval((xi - self.center) / self.width),
            Shape::Indicator => self.amp,
            Shape::Gaussian => {
                let u = xi - self.center;
                self.amp * (-u * u).exp()
            }
        };
        match self.multiplier {
            Multiplier::None => base,
            Multiplier::Annulus(k) => base * crate::initial_data::dyadic_cutoff(k, xi.abs()),
            Multiplier::Low => base * crate::initial_data::low_cutoff(xi.abs()),
        }
    }
}

/// A one-dimensional factor: a finite sum of components.
pub type Factor = Vec<Component>;

pub fn factor_eval(f: &[Component], xi: f64) -> f64 {
    f.iter().map(|c| c.eval(xi)).sum()
}

/// Disjoint intervals covering the union of component supports.
pub fn merged_support(f: &[Component]) -> Vec<(f64, f64)> {
    let mut iv: Vec<(f64, f64)> = f.iter().filter(|c| c.lo < c.hi).map(|c| (c.lo, c.hi)).collect();
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (a, b) in iv {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Phase `γ ξ + t |ξ|^m` of the curve-shifted propagator in one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub gamma: f64,
    pub t: f64,
    pub m: f64,
}

impl Phase {
    #[inline]
    fn at(&self, xi: f64) -> f64 {
        let disp = if self.t == 0.0 {
            0.0
        } else if self.m == 2.0 {
            xi * xi
        } else {
            xi.abs().powf(self.m)
        };
        self.gamma * xi + self.t * disp
    }

    /// Upper estimate of the phase variation over [a, b].
    fn variation(&self, a: f64, b: f64, gamma_abs: f64) -> f64 {
        let w = b - a;
        let disp = if self.t == 0.0 {
            0.0
        } else if self.m >= 1.0 {
            self.m * a.abs().max(b.abs()).powf(self.m - 1.0) * w
        } else {
            (b.abs().powf(self.m) - a.abs().powf(self.m)).abs()
        };
        gamma_abs * w + self.t * disp
    }
}

/// Intervals with the kink of |ξ|^m at the origin split off when it matters.
fn integration_intervals(f: &[Component], phase: &Phase) -> Vec<(f64, f64)> {
    let split = phase.t != 0.0 && phase.m != 2.0;
    let mut out = Vec::new();
    for (a, b) in merged_support(f) {
        if split && a < 0.0 && b > 0.0 {
            out.push((a, 0.0));
            out.push((0.0, b));
        } else {
            out.push((a, b));
        }
    }
    out
}

/// Per-interval node budgets for the phase, before doubling.
fn budgets(intervals: &[(f64, f64)], phase: &Phase, gamma_abs: f64, quad: &QuadratureSpec) -> Vec<usize> {
    intervals
        .iter()
        .map(|&(a, b)| {
            let v = phase.variation(a, b, gamma_abs);
            let n = (quad.nodes_per_radian * v).ceil();
            let n = if n.is_finite() { n.min(usize::MAX as f64 / 4.0) as usize } else { usize::MAX / 4 };
            n.max(quad.base_nodes)
        })
        .collect()
}

fn panels_for(nodes: usize, order: usize) -> usize {
    nodes.div_ceil(order).max(1)
}

struct Sum {
    value: Complex64,
    mass: f64,
    nodes: usize,
}

fn composite(f: &[Component], phase: &Phase, intervals: &[(f64, f64)], nodes: &[usize], order: usize) -> Sum {
    let rule = gauss_legendre(order);
    let mut value = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    let mut count = 0;
    for (&(a, b), &n) in intervals.iter().zip(nodes) {
        let p = panels_for(n, order);
        let h = (b - a) / p as f64;
        for k in 0..p {
            let lo = a + h * k as f64;
            let mid = lo + 0.5 * h;
            let half = 0.5 * h;
            for &(u, w) in rule.iter() {
                let xi = mid + half * u;
                let amp = factor_eval(f, xi);
                if amp == 0.0 {
                    continue;
                }
                let (s, c) = phase.at(xi).sin_cos();
                let wa = w * half * amp;
                value += Complex64::new(wa * c, wa * s);
                mass += wa.abs();
            }
            count += order;
        }
    }
    Sum { value, mass, nodes: count }
}

/// ∫ e^{i(γξ + t|ξ|^m)} F(ξ) dξ for a one-dimensional factor F.
///
/// Returns the value and the number of nodes used by the final pass.
pub fn oscillatory_integral(f: &[Component], phase: Phase, quad: &QuadratureSpec) -> Result<(Complex64, usize)> {
    let intervals = integration_intervals(f, &phase);
    if intervals.is_empty() {
        return Ok((Complex64::new(0.0, 0.0), 0));
    }
    let gamma_abs = phase.gamma.abs();
    let nodes = budgets(&intervals, &phase, gamma_abs, quad);
    let total: usize = nodes.iter().sum();
    let needed = if quad.self_check { 2 * total } else { total };
    if needed > quad.max_nodes {
        // Redistribute the cap proportionally and report both estimates.
        let scale = quad.max_nodes as f64 / needed as f64;
        let capped: Vec<usize> = nodes.iter().map(|&n| ((n as f64 * scale) as usize).max(quad.panel_order)).collect();
        let coarse = composite(f, &phase, &intervals, &capped, quad.panel_order);
        let doubled: Vec<usize> = capped.iter().map(|n| 2 * n).collect();
        let fine = composite(f, &phase, &intervals, &doubled, quad.panel_order);
        return Err(Error::Accuracy {
            what: format!("node cap {} exceeded (need {needed})", quad.max_nodes),
            coarse: coarse.value,
            fine: fine.value,
            nodes: fine.nodes,
        });
    }
    let coarse = composite(f, &phase, &intervals, &nodes, quad.panel_order);
    if !quad.self_check {
        return Ok((coarse.value, coarse.nodes));
    }
    let doubled: Vec<usize> = nodes.iter().map(|n| 2 * n).collect();
    let fine = composite(f, &phase, &intervals, &doubled, quad.panel_order);
    let diff = (fine.value - coarse.value).norm();
    if diff > SELF_CHECK_TOL * fine.mass.max(f64::MIN_POSITIVE) {
        return Err(Error::Accuracy {
            what: format!("self-check failed, relative difference {:.3e}", diff / fine.mass),
            coarse: coarse.value,
            fine: fine.value,
            nodes: fine.nodes,
        });
    }
    Ok((fine.value, fine.nodes))
}

/// The same integral for positions `γ₀ + i·h`, i < count, sharing one node set.
///
/// The exponential in γ is advanced by a recurrence and re-seeded every 32
/// steps, so the cost per point is a complex multiply-add per node.
pub fn oscillatory_line(
    f: &[Component],
    gamma0: f64,
    h: f64,
    count: usize,
    t: f64,
    m: f64,
    quad: &QuadratureSpec,
) -> Result<(Vec<Complex64>, usize)> {
    let phase0 = Phase { gamma: gamma0, t, m };
    let intervals = integration_intervals(f, &phase0);
    if intervals.is_empty() || count == 0 {
        return Ok((vec![Complex64::new(0.0, 0.0); count], 0));
    }
    let gamma_abs = gamma0.abs().max((gamma0 + h * (count as f64 - 1.0)).abs());
    let nodes = budgets(&intervals, &phase0, gamma_abs, quad);
    let total: usize = nodes.iter().sum();
    let needed = if quad.self_check { 2 * total } else { total };
    if needed > quad.max_nodes {
        return Err(Error::Accuracy {
            what: format!("node cap {} exceeded (need {needed})", quad.max_nodes),
            coarse: Complex64::new(f64::NAN, f64::NAN),
            fine: Complex64::new(f64::NAN, f64::NAN),
            nodes: quad.max_nodes,
        });
    }
    let run = |budget: &[usize]| {
        let rule = gauss_legendre(quad.panel_order);
        let mut out = vec![Complex64::new(0.0, 0.0); count];
        let mut mass = 0.0;
        let mut used = 0;
        for (&(a, b), &n) in intervals.iter().zip(budget) {
            let p = panels_for(n, quad.panel_order);
            let hp = (b - a) / p as f64;
            for k in 0..p {
                let mid = a + hp * (k as f64 + 0.5);
                for &(u, w) in rule.iter() {
                    let xi = mid + 0.5 * hp * u;
                    let amp = factor_eval(f, xi);
                    if amp == 0.0 {
                        continue;
                    }
                    let wa = w * 0.5 * hp * amp;
                    mass += wa.abs();
                    let base = phase0.at(xi);
                    let step = Complex64::from_polar(1.0, h * xi);
                    let mut cur = Complex64::new(0.0, 0.0);
                    for (i, o) in out.iter_mut().enumerate() {
                        if i % 32 == 0 {
                            cur = Complex64::from_polar(wa, base + h * xi * i as f64);
                        } else {
                            cur *= step;
                        }
                        *o += cur;
                    }
                }
                used += quad.panel_order;
            }
        }
        (out, mass, used)
    };
    let (coarse, _, used) = run(&nodes);
    if !quad.self_check {
        return Ok((coarse, used));
    }
    let doubled: Vec<usize> = nodes.iter().map(|n| 2 * n).collect();
    let (fine, mass, used) = run(&doubled);
    for (c, fv) in coarse.iter().zip(&fine) {
        if (c - fv).norm() > SELF_CHECK_TOL * mass.max(f64::MIN_POSITIVE) {
            return Err(Error::Accuracy {
                what: "self-check failed on line evaluation".into(),
                coarse: *c,
                fine: *fv,
                nodes: used,
            });
        }
    }
    Ok((fine, used))
}

/// Non-oscillatory ∫ w(ξ)·|F(ξ)|² over the factor support, with node doubling.
pub fn weighted_mass_1d(f: &[Component], weight: impl Fn(f64) -> f64, quad: &QuadratureSpec) -> Result<f64> {
    let intervals = merged_support(f);
    if intervals.is_empty() {
        return Ok(0.0);
    }
    let rule = gauss_legendre(quad.panel_order);
    let eval = |n: usize| {
        let mut acc = 0.0;
        for &(a, b) in &intervals {
            let p = panels_for(n, quad.panel_order);
            let h = (b - a) / p as f64;
            for k in 0..p {
                let mid = a + h * (k as f64 + 0.5);
                for &(u, w) in rule.iter() {
                    let xi = mid + 0.5 * h * u;
                    let v = factor_eval(f, xi);
                    acc += w * 0.5 * h * weight(xi) * v * v;
                }
            }
        }
        acc
    };
    converge(|n| eval(n), quad)
}

/// Nodes, weights and factor values for tensor-product integration.
pub fn tabulate(f: &[Component], n: usize, quad: &QuadratureSpec) -> Vec<(f64, f64, f64)> {
    let rule = gauss_legendre(quad.panel_order);
    let mut out = Vec::new();
    for (a, b) in merged_support(f) {
        let p = panels_for(n, quad.panel_order);
        let h = (b - a) / p as f64;
        for k in 0..p {
            let mid = a + h * (k as f64 + 0.5);
            for &(u, w) in rule.iter() {
                let xi = mid + 0.5 * h * u;
                out.push((xi, w * 0.5 * h, factor_eval(f, xi)));
            }
        }
    }
    out
}

/// Doubles the per-interval node budget until two passes agree.
pub fn converge(eval: impl Fn(usize) -> f64, quad: &QuadratureSpec) -> Result<f64> {
    let mut n = quad.base_nodes;
    let mut prev = eval(n);
    loop {
        let next = eval(2 * n);
        if (next - prev).abs() <= SELF_CHECK_TOL * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        n *= 2;
        if 2 * n > quad.max_nodes {
            return Err(Error::Accuracy {
                what: "non-oscillatory integral did not converge".into(),
                coarse: Complex64::new(prev, 0.0),
                fine: Complex64::new(next, 0.0),
                nodes: n,
            });
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(center: f64, width: f64, amp: f64) -> Component {
        Component {
            shape: Shape::Bump,
            center,
            width,
            amp,
            lo: center - width / 2.0,
            hi: center + width / 2.0,
            multiplier: Multiplier::None,
        }
    }

    #[test]
    fn rule_is_sorted_and_sums_to_two() {
        let r = gauss_legendre(16);
        assert_eq!(r.len(), 16);
        assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
        let s: f64 = r.iter().map(|p| p.1).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn merge_overlapping() {
        let f = vec![bump(0.0, 2.0, 1.0), bump(0.5, 2.0, 1.0), bump(5.0, 1.0, 1.0)];
        assert_eq!(merged_support(&f), vec![(-1.0, 1.5), (4.5, 5.5)]);
    }

    #[test]
    fn line_matches_pointwise() {
        let f = vec![bump(40.0, 30.0, 0.1)];
        let q = QuadratureSpec::default();
        let (line, _) = oscillatory_line(&f, -0.3, 0.01, 50, 0.002, 2.0, &q).unwrap();
        for (i, v) in line.iter().enumerate() {
            let phase = Phase { gamma: -0.3 + 0.01 * i as f64, t: 0.002, m: 2.0 };
            let (p, _) = oscillatory_integral(&f, phase, &q).unwrap();
            assert!((p - v).norm() < 1e-11, "{i}: {p} vs {v}");
        }
    }

    #[test]
    fn cap_reports_both_estimates() {
        let f = vec![bump(0.0, 1000.0, 1e-3)];
        let q = QuadratureSpec { max_nodes: 4096, ..Default::default() };
        let e = oscillatory_integral(&f, Phase { gamma: 50.0, t: 0.0, m: 2.0 }, &q).unwrap_err();
        match e {
            Error::Accuracy { coarse, fine, .. } => assert!(coarse.norm().is_finite() && fine.norm().is_finite()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
