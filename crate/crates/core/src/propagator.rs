//! U_γ^m f(x,t) = (2π)^{−d} ∫ e^{i(γ(x,t)·ξ + t|ξ|^m)} f̂(ξ) dξ.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::CurveSpec;
use crate::error::{domain, Error, Result};
use crate::initial_data::FrequencyProfile;
use crate::quadrature::{self, Factor, Phase, QuadratureSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: Vec<f64>,
    pub t: f64,
    pub value: Complex64,
    pub initial: Complex64,
    pub node_count: usize,
}

/// Tensor-product value of the profile's factors at curve position `gamma`.
pub fn fourier_value(factors: &[Factor], gamma: &[f64], t: f64, m: f64, quad: &QuadratureSpec) -> Result<(Complex64, usize)> {
    let mut value = Complex64::new(1.0, 0.0);
    let mut nodes = 0;
    for (f, &g) in factors.iter().zip(gamma) {
        let (v, n) = quadrature::oscillatory_integral(f, Phase { gamma: g, t, m }, quad)?;
        value *= v / (2.0 * PI);
        nodes += n;
    }
    Ok((value, nodes))
}

/// A profile bound to a curve and dispersion power, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub profile: FrequencyProfile,
    pub curve: CurveSpec,
    pub m: f64,
    pub quad: QuadratureSpec,
    factors: Vec<Factor>,
}

impl Propagator {
    pub fn new(profile: &FrequencyProfile, curve: &CurveSpec, m: f64, quad: &QuadratureSpec) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(domain(format!("dispersion power m = {m} must be positive")));
        }
        quad.validate()?;
        profile.validate()?;
        if curve.d != profile.d {
            return Err(domain(format!(
                "curve dimension {} differs from profile dimension {}",
                curve.d, profile.d
            )));
        }
        if profile.d >= 2 && m != 2.0 {
            return Err(Error::Unsupported("fractional dispersion is defined only for d = 1".into()));
        }
        let factors = profile.factors()?;
        Ok(Propagator {
            profile: profile.clone(),
            curve: curve.clone(),
            m,
            quad: *quad,
            factors,
        })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// U_γ^m f(x,t) and the node count used.
    pub fn value(&self, x: &[f64], t: f64) -> Result<(Complex64, usize)> {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain(format!("t = {t} not in [0, 1]")));
        }
        let gamma = self.curve.gamma(x, t)?;
        fourier_value(&self.factors, &gamma, t, self.m, &self.quad)
    }

    /// f(x), through the same code path as `value` at t = 0.
    pub fn initial(&self, x: &[f64]) -> Result<Complex64> {
        Ok(self.value(x, 0.0)?.0)
    }

    pub fn evaluate(&self, x: &[f64], t: f64) -> Result<FieldSample> {
        let (value, node_count) = self.value(x, t)?;
        let initial = if t == 0.0 { value } else { self.initial(x)? };
        Ok(FieldSample {
            x: x.to_vec(),
            t,
            value,
            initial,
            node_count,
        })
    }

    /// Values along the line x₀ + i·h (d = 1) at a fixed time, sharing nodes.
    pub fn line(&self, x0: f64, h: f64, count: usize, t: f64) -> Result<Vec<Complex64>> {
        if self.profile.d != 1 {
            return Err(Error::Unsupported("line evaluation is one-dimensional".into()));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(domain(format!("t = {t} not in [0, 1]")));
        }
        if self.curve.is_custom() {
            return Err(Error::Unsupported("line evaluation needs a translation curve".into()));
        }
        // Translation curves move every point by the same amount.
        let g0 = self.curve.gamma1(&[x0], t)?;
        let (vals, _) = quadrature::oscillatory_line(&self.factors[0], g0, h, count, t, self.m, &self.quad)?;
        Ok(vals.into_iter().map(|v| v / (2.0 * PI)).collect())
    }
}

pub fn evaluate(
    profile: &FrequencyProfile,
    curve: &CurveSpec,
    m: f64,
    x: &[f64],
    t: f64,
    quad: &QuadratureSpec,
) -> Result<FieldSample> {
    Propagator::new(profile, curve, m, quad)?.evaluate(x, t)
}

#[derive(Debug, Clone)]
pub struct GridFailure {
    pub x_index: usize,
    pub t_index: usize,
    pub error: Error,
}

#[derive(Debug, Clone, Default)]
pub struct GridResult {
    /// Successful samples in (x-major, t-minor) order.
    pub samples: Vec<FieldSample>,
    pub failures: Vec<GridFailure>,
}

pub fn evaluate_grid(
    profile: &FrequencyProfile,
    curve: &CurveSpec,
    m: f64,
    xs: &[Vec<f64>],
    ts: &[f64],
    quad: &QuadratureSpec,
) -> Result<GridResult> {
    let prop = Propagator::new(profile, curve, m, quad)?;
    let pairs: Vec<(usize, usize)> = (0..xs.len()).flat_map(|i| (0..ts.len()).map(move |j| (i, j))).collect();
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&(i, j)| (i, j, prop.evaluate(&xs[i], ts[j])))
        .collect();
    let mut out = GridResult::default();
    for (i, j, r) in results {
        match r {
            Ok(s) => out.samples.push(s),
            Err(error) => out.failures.push(GridFailure {
                x_index: i,
                t_index: j,
                error,
            }),
        }
    }
    Ok(out)
}
