use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// γ(x,t) = x − t^α e₁
    MinusShift,
    /// γ(x,t) = x + t^α e₁
    PlusShift,
    /// γ(x,t) = x
    Straight,
}

impl CurveKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "minus-shift" | "minus" => Ok(CurveKind::MinusShift),
            "plus-shift" | "plus" => Ok(CurveKind::PlusShift),
            "straight" => Ok(CurveKind::Straight),
            _ => Err(domain(format!("unknown curve kind '{s}'"))),
        }
    }
}

pub type CurveFn = dyn Fn(&[f64], f64) -> Vec<f64> + Send + Sync;

/// A curve family. Built-in kinds are plain data; `custom` wraps a user closure.
#[derive(Clone)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub alpha: f64,
    pub d: usize,
    custom: Option<Arc<CurveFn>>,
}

impl fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveSpec")
            .field("kind", &self.kind)
            .field("alpha", &self.alpha)
            .field("d", &self.d)
            .field("custom", &self.custom.is_some())
            .finish()
    }
}

impl CurveSpec {
    pub fn new(kind: CurveKind, alpha: f64, d: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!("curve alpha = {alpha} not in (0, 1]")));
        }
        if d == 0 {
            return Err(domain("curve dimension must be at least 1"));
        }
        Ok(CurveSpec {
            kind,
            alpha,
            d,
            custom: None,
        })
    }

    /// User-supplied curve. `alpha` is the claimed Hölder exponent used by
    /// regularity checks; `kind` is reported as straight.
    pub fn custom(alpha: f64, d: usize, f: Arc<CurveFn>) -> Result<Self> {
        let mut spec = CurveSpec::new(CurveKind::Straight, alpha, d)?;
        spec.custom = Some(f);
        Ok(spec)
    }

    pub fn is_custom(&self) -> bool {
        self.custom.is_some()
    }

    /// ±1 for shift kinds, 0 for the straight curve.
    pub fn shift_sign(&self) -> f64 {
        match self.kind {
            CurveKind::MinusShift => -1.0,
            CurveKind::PlusShift => 1.0,
            CurveKind::Straight => 0.0,
        }
    }

    /// Signed power `sign(t)|t|^α`, the shift magnitude along e₁.
    pub fn shift(&self, t: f64) -> f64 {
        t.signum() * t.abs().powf(self.alpha)
    }

    pub fn gamma(&self, x: &[f64], t: f64) -> Result<Vec<f64>> {
        if x.len() != self.d {
            return Err(domain(format!(
                "point has dimension {}, curve has {}",
                x.len(),
                self.d
            )));
        }
        if !(t.abs() <= 1.0) {
            return Err(domain(format!("|t| = {} exceeds 1", t.abs())));
        }
        if let Some(f) = &self.custom {
            let y = f(x, t);
            if y.len() != self.d {
                return Err(domain("custom curve returned wrong dimension"));
            }
            if t == 0.0 && y.iter().zip(x).any(|(a, b)| a.to_bits() != b.to_bits()) {
                return Err(domain("custom curve violates gamma(x, 0) = x"));
            }
            return Ok(y);
        }
        let mut y = x.to_vec();
        if t != 0.0 {
            y[0] += self.shift_sign() * self.shift(t);
        }
        Ok(y)
    }

    /// First coordinate only; the common case in one dimension.
    pub fn gamma1(&self, x: &[f64], t: f64) -> Result<f64> {
        if self.custom.is_some() {
            return Ok(self.gamma(x, t)?[0]);
        }
        if !(t.abs() <= 1.0) {
            return Err(domain(format!("|t| = {} exceeds 1", t.abs())));
        }
        if t == 0.0 {
            return Ok(x[0]);
        }
        Ok(x[0] + self.shift_sign() * self.shift(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Points per coordinate of the tensor grid in [−1, 1]^d (kept inside the unit ball).
    pub points_per_axis: usize,
    /// Times in [0, 1].
    pub times: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            points_per_axis: 24,
            times: 48,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub bilip_lower: f64,
    pub bilip_upper: f64,
    pub holder_const: f64,
    pub sample_count: usize,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn jitter(i: usize, axis: usize) -> f64 {
    // Kronecker sequence with a different irrational per axis.
    let a = GOLDEN + 0.414_213_562_373_095 * axis as f64;
    ((i as f64 + 1.0) * a).fract()
}

fn sample_points(d: usize, n: usize) -> Vec<Vec<f64>> {
    let h = 2.0 / n as f64;
    let total = n.pow(d as u32);
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let mut idx = flat;
        let mut p = Vec::with_capacity(d);
        for axis in 0..d {
            let i = idx % n;
            idx /= n;
            p.push(-1.0 + h * (i as f64 + jitter(flat, axis)));
        }
        if p.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            out.push(p);
        }
    }
    out
}

fn sample_times(n: usize) -> Vec<f64> {
    let mut ts: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 {
                0.0
            } else if i + 1 == n {
                1.0
            } else {
                (i as f64 + jitter(i, 7) - 0.5) / (n - 1) as f64
            }
        })
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v) * (u - v))
        .sum::<f64>()
        .sqrt()
}

pub fn verify_regularity(spec: &CurveSpec, samples: &SampleSpec) -> Result<RegularityReport> {
    if samples.points_per_axis < 2 || samples.times < 2 {
        return Err(domain("sample spec needs at least two points and two times"));
    }
    let xs = sample_points(spec.d, samples.points_per_axis);
    let ts = sample_times(samples.times);
    if xs.len() * ts.len() < 1000 {
        return Err(domain(format!(
            "sample spec gives {} point/time pairs, need at least 1000",
            xs.len() * ts.len()
        )));
    }
    let values: Vec<Vec<Vec<f64>>> = ts
        .iter()
        .map(|&t| xs.iter().map(|x| spec.gamma(x, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    // Space pairs at fixed time.
    let (lo, hi, n_space) = (0..ts.len())
        .into_par_iter()
        .map(|ti| {
            let row = &values[ti];
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            let mut n = 0usize;
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    let dx = dist(&xs[i], &xs[j]);
                    if dx == 0.0 {
                        continue;
                    }
                    let q = dist(&row[i], &row[j]) / dx;
                    lo = lo.min(q);
                    hi = hi.max(q);
                    n += 1;
                }
            }
            (lo, hi, n)
        })
        .reduce(
            || (f64::INFINITY, 0.0, 0),
            |a, b| (a.0.min(b.0), a.1.max(b.1), a.2 + b.2),
        );
    // Time pairs at fixed point.
    let (holder, n_time) = (0..xs.len())
        .into_par_iter()
        .map(|xi| {
            let mut c = 0.0f64;
            let mut n = 0usize;
            for a in 0..ts.len() {
                for b in a + 1..ts.len() {
                    let dt = (ts[a] - ts[b]).abs();
                    if dt == 0.0 {
                        continue;
                    }
                    let q = dist(&values[a][xi], &values[b][xi]) / dt.powf(spec.alpha);
                    c = c.max(q);
                    n += 1;
                }
            }
            (c, n)
        })
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    if n_space == 0 || n_time == 0 {
        return Err(domain("all sample pairs were degenerate"));
    }
    if !(lo.is_finite() && hi.is_finite() && holder.is_finite()) {
        return Err(Error::Domain("non-finite regularity constant".into()));
    }
    Ok(RegularityReport {
        bilip_lower: lo,
        bilip_upper: hi,
        holder_const: holder,
        sample_count: n_space + n_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        let c = CurveSpec::new(CurveKind::MinusShift, 0.5, 1).unwrap();
        assert!((c.gamma(&[0.25], 0.04).unwrap()[0] - 0.05).abs() < 1e-15);
        let c = CurveSpec::new(CurveKind::PlusShift, 0.25, 1).unwrap();
        assert!((c.gamma(&[0.0], 0.0016).unwrap()[0] - 0.2).abs() < 1e-15);
        assert!(c.gamma(&[0.0], 1.5).is_err());
        let x = [0.1f64, -0.3];
        let c = CurveSpec::new(CurveKind::MinusShift, 0.3, 2).unwrap();
        let y = c.gamma(&x, 0.0).unwrap();
        assert_eq!(y[0].to_bits(), x[0].to_bits());
        assert_eq!(y[1].to_bits(), x[1].to_bits());
        // the shift only touches e₁
        assert_eq!(c.gamma(&x, 0.5).unwrap()[1], x[1]);
    }

    #[test]
    fn custom_curve_contract() {
        let bad = CurveSpec::custom(0.5, 1, Arc::new(|x: &[f64], t: f64| vec![x[0] + 1e-3 + t])).unwrap();
        assert!(bad.gamma(&[0.2], 0.0).is_err());
        let good = CurveSpec::custom(0.5, 1, Arc::new(|x: &[f64], t: f64| vec![x[0] + t * t])).unwrap();
        assert_eq!(good.gamma(&[0.2], 0.0).unwrap(), vec![0.2]);
    }

    #[test]
    fn regularity_of_builtins() {
        let s = SampleSpec::default();
        for kind in [CurveKind::MinusShift, CurveKind::PlusShift] {
            let r = verify_regularity(&CurveSpec::new(kind, 0.5, 1).unwrap(), &s).unwrap();
            assert!((r.bilip_lower - 1.0).abs() < 1e-12);
            assert!((r.bilip_upper - 1.0).abs() < 1e-12);
            assert!(r.holder_const <= 1.0 + 1e-9);
            assert!(r.holder_const > 0.99);
            assert!(r.sample_count >= 1000);
        }
        let r = verify_regularity(&CurveSpec::new(CurveKind::Straight, 0.5, 1).unwrap(), &s).unwrap();
        assert_eq!(r.holder_const, 0.0);
    }

    #[test]
    fn too_few_samples() {
        let s = SampleSpec {
            points_per_axis: 4,
            times: 4,
        };
        assert!(verify_regularity(&CurveSpec::new(CurveKind::MinusShift, 0.5, 1).unwrap(), &s).is_err());
    }
}
