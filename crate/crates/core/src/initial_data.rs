//! Closed-form initial data on the Fourier side.
//!
//! Every built-in profile is a tensor product of one-dimensional factors,
//! each a finite sum of shaped components with explicit compact support.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bump::BUMP_L2_SQ;
use crate::error::{domain, Error, Result};
use crate::propagator;
use crate::quadrature::{self, Component, Factor, Multiplier, Phase, QuadratureSpec, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    BumpDilated,
    BumpModulated,
    BumpTensor,
    IndicatorBand,
    Bourgain,
    AnnulusBump,
    GaussianLike,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::BumpDilated => "bump-dilated",
            Family::BumpModulated => "bump-modulated",
            Family::BumpTensor => "bump-tensor",
            Family::IndicatorBand => "indicator-band",
            Family::Bourgain => "bourgain",
            Family::AnnulusBump => "annulus-bump",
            Family::GaussianLike => "gaussian-like",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        [
            Family::BumpDilated,
            Family::BumpModulated,
            Family::BumpTensor,
            Family::IndicatorBand,
            Family::Bourgain,
            Family::AnnulusBump,
            Family::GaussianLike,
        ]
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| domain(format!("unknown family '{s}'")))
    }

    pub fn is_bump(self) -> bool {
        matches!(self, Family::BumpDilated | Family::BumpModulated | Family::BumpTensor | Family::AnnulusBump)
    }
}

/// Smooth Littlewood–Paley localization applied on the Fourier side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Localization {
    /// Multiplied by the cutoff supported in 2^{k−1} ≤ |ξ| ≤ 2^{k+1}.
    Annulus(i32),
    /// Multiplied by the low-frequency cutoff supported in |ξ| ≤ 2.
    Low,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyProfile {
    pub family: Family,
    pub d: usize,
    /// Frequency scale R; 2^k for annulus data.
    pub r: f64,
    #[serde(default)]
    pub epsilon: f64,
    /// Dyadic scale of annulus data.
    #[serde(default)]
    pub k: i32,
    /// Spectral center of gaussian-like data.
    #[serde(default)]
    pub center: f64,
    /// Amplitude of gaussian-like data.
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub localization: Option<Localization>,
}

fn one() -> f64 {
    1.0
}

/// Truncation radius of gaussian-like data.
pub const GAUSSIAN_CUTOFF: f64 = 8.0;

impl FrequencyProfile {
    fn base(family: Family, d: usize, r: f64) -> Self {
        FrequencyProfile {
            family,
            d,
            r,
            epsilon: 0.0,
            k: 0,
            center: 0.0,
            amplitude: 1.0,
            localization: None,
        }
    }

    pub fn bump_dilated(r: f64) -> Result<Self> {
        Self::base(Family::BumpDilated, 1, r).checked()
    }

    pub fn bump_modulated(r: f64) -> Result<Self> {
        Self::base(Family::BumpModulated, 1, r).checked()
    }

    pub fn bump_tensor(r: f64, epsilon: f64, d: usize) -> Result<Self> {
        let mut p = Self::base(Family::BumpTensor, d, r);
        p.epsilon = epsilon;
        p.checked()
    }

    pub fn indicator_band(r: f64) -> Result<Self> {
        Self::base(Family::IndicatorBand, 1, r).checked()
    }

    pub fn bourgain(r: f64, d: usize) -> Result<Self> {
        Self::base(Family::Bourgain, d, r).checked()
    }

    /// Smooth bump with supp f̂ ⊂ [2^{k−1}, 2^{k+1}], normalized to ‖f‖₂ = 1.
    pub fn annulus_bump(k: i32) -> Result<Self> {
        let mut p = Self::base(Family::AnnulusBump, 1, 2f64.powi(k));
        p.k = k;
        p.checked()
    }

    /// f̂(ξ) = amplitude·Π exp(−(ξ_j − c_j)²) truncated to |ξ_j − c_j| ≤ 8, with c = center·e₁.
    pub fn gaussian_like(d: usize, center: f64, amplitude: f64) -> Result<Self> {
        let mut p = Self::base(Family::GaussianLike, d, 1.0);
        p.center = center;
        p.amplitude = amplitude;
        p.checked()
    }

    /// Generic constructor used by the CLI and plans.
    pub fn build(family: Family, r: f64, epsilon: f64, d: usize) -> Result<Self> {
        match family {
            Family::BumpDilated | Family::BumpModulated | Family::IndicatorBand if d != 1 => {
                Err(domain(format!("{} is one-dimensional", family.name())))
            }
            Family::BumpDilated => Self::bump_dilated(r),
            Family::BumpModulated => Self::bump_modulated(r),
            Family::BumpTensor => Self::bump_tensor(r, epsilon, d),
            Family::IndicatorBand => Self::indicator_band(r),
            Family::Bourgain => Self::bourgain(r, d),
            Family::AnnulusBump => {
                if d != 1 {
                    return Err(domain("annulus-bump is one-dimensional"));
                }
                let k = r.log2().round();
                if (2f64.powf(k) - r).abs() > 1e-9 * r {
                    return Err(domain("annulus-bump needs R = 2^k"));
                }
                Self::annulus_bump(k as i32)
            }
            Family::GaussianLike => Self::gaussian_like(d, 0.0, 1.0),
        }
    }

    fn checked(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d > 3 {
            return Err(domain("dimension must be 1, 2 or 3"));
        }
        if !(self.r >= 1.0 && self.r.is_finite()) {
            return Err(domain(format!("R = {} must be a finite real >= 1", self.r)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(domain("epsilon must be finite and >= 0"));
        }
        match self.family {
            Family::BumpDilated | Family::BumpModulated | Family::IndicatorBand | Family::AnnulusBump
                if self.d != 1 =>
            {
                Err(domain(format!("{} is one-dimensional", self.family.name())))
            }
            Family::Bourgain if self.d > 2 => Err(domain("bourgain data supports d = 1 or 2")),
            Family::AnnulusBump if self.k < 1 => Err(domain("annulus scale k must be >= 1")),
            Family::GaussianLike if !(self.amplitude.is_finite() && self.center.is_finite()) => {
                Err(domain("gaussian-like parameters must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// Lattice spacing D = R^{(d+2)/(2(d+1))} of the bourgain data.
    pub fn lattice_spacing(&self) -> f64 {
        let d = self.d as f64;
        self.r.powf((d + 2.0) / (2.0 * (d + 1.0)))
    }

    /// Integers ℓ with R/(2D) < ℓ < R/D.
    pub fn lattice_range(&self) -> Vec<i64> {
        let dd = self.lattice_spacing();
        let lo = self.r / (2.0 * dd);
        let hi = self.r / dd;
        let mut out = Vec::new();
        let mut l = lo.floor() as i64 + 1;
        while (l as f64) < hi {
            if (l as f64) > lo {
                out.push(l);
            }
            l += 1;
        }
        out
    }

    /// The unlocalized tensor factors, one per coordinate.
    fn raw_factors(&self) -> Vec<Factor> {
        let r = self.r;
        let bump = |center: f64, width: f64, amp: f64| Component {
            shape: Shape::Bump,
            center,
            width,
            amp,
            lo: center - 0.5 * width,
            hi: center + 0.5 * width,
            multiplier: Multiplier::None,
        };
        let unit = || vec![bump(0.0, 1.0, 1.0)];
        match self.family {
            Family::BumpDilated => vec![vec![bump(0.0, r, 1.0 / r)]],
            Family::BumpModulated => vec![vec![bump(-r * r, r, 1.0 / r)]],
            Family::BumpTensor => {
                let mut f = vec![vec![bump(-r.powf(1.0 + self.epsilon), r, 1.0 / r)]];
                f.extend((1..self.d).map(|_| unit()));
                f
            }
            Family::IndicatorBand => vec![vec![Component {
                shape: Shape::Indicator,
                center: r + 0.5,
                width: 1.0,
                amp: 1.0,
                lo: r,
                hi: r + 1.0,
                multiplier: Multiplier::None,
            }]],
            Family::Bourgain => {
                // φ̂(λ) = π·g(λ/2) so that φ(0) = 1 and supp φ̂ = [−1, 1].
                let sr = r.sqrt();
                let mut f = vec![vec![bump(r, 2.0 * sr, PI / sr)]];
                if self.d == 2 {
                    let dd = self.lattice_spacing();
                    f.push(self.lattice_range().into_iter().map(|l| bump(dd * l as f64, 2.0, PI)).collect());
                }
                f
            }
            Family::AnnulusBump => {
                let s = 2f64.powi(self.k);
                let width = 1.5 * s;
                let amp = (2.0 * PI / (width * BUMP_L2_SQ)).sqrt();
                vec![vec![bump(1.25 * s, width, amp)]]
            }
            Family::GaussianLike => (0..self.d)
                .map(|j| {
                    let c = if j == 0 { self.center } else { 0.0 };
                    let amp = if j == 0 { self.amplitude } else { 1.0 };
                    vec![Component {
                        shape: Shape::Gaussian,
                        center: c,
                        width: 1.0,
                        amp,
                        lo: c - GAUSSIAN_CUTOFF,
                        hi: c + GAUSSIAN_CUTOFF,
                        multiplier: Multiplier::None,
                    }]
                })
                .collect(),
        }
    }

    /// Tensor factors including any one-dimensional localization.
    pub fn factors(&self) -> Result<Vec<Factor>> {
        let raw = self.raw_factors();
        let Some(loc) = self.localization else {
            return Ok(raw);
        };
        if self.d != 1 {
            return Err(Error::Unsupported(
                "localized profiles are not tensor products for d >= 2".into(),
            ));
        }
        let (mult, bands): (Multiplier, Vec<(f64, f64)>) = match loc {
            Localization::Annulus(k) => {
                let a = 2f64.powi(k - 1);
                let b = 2f64.powi(k + 1);
                (Multiplier::Annulus(k), vec![(-b, -a), (a, b)])
            }
            Localization::Low => (Multiplier::Low, vec![(-2.0, 2.0)]),
        };
        let mut out = Vec::new();
        for c in &raw[0] {
            for &(a, b) in &bands {
                let lo = c.lo.max(a);
                let hi = c.hi.min(b);
                if lo < hi {
                    out.push(Component {
                        lo,
                        hi,
                        multiplier: mult,
                        ..*c
                    });
                }
            }
        }
        Ok(vec![out])
    }

    /// Product of closed intervals containing supp f̂.
    pub fn support_box(&self) -> Vec<(f64, f64)> {
        let hull = |f: &Factor| {
            let iv = quadrature::merged_support(f);
            match (iv.first(), iv.last()) {
                (Some(a), Some(b)) => (a.0, b.1),
                _ => (0.0, 0.0),
            }
        };
        match self.factors() {
            Ok(fs) => fs.iter().map(hull).collect(),
            Err(_) => {
                let (lo, hi) = match self.localization {
                    Some(Localization::Annulus(k)) => (-(2f64.powi(k + 1)), 2f64.powi(k + 1)),
                    _ => (-2.0, 2.0),
                };
                self.raw_factors()
                    .iter()
                    .map(|f| {
                        let (a, b) = hull(f);
                        (a.max(lo), b.min(hi))
                    })
                    .collect()
            }
        }
    }

    /// True when the localized profile vanishes identically.
    pub fn is_zero(&self) -> bool {
        match self.factors() {
            Ok(fs) => fs.iter().any(|f| f.is_empty()) || (self.family == Family::GaussianLike && self.amplitude == 0.0),
            Err(_) => false,
        }
    }
}

#[inline]
fn h(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// χ₀(r): 1 for r ≤ 1, 0 for r ≥ 2, smooth in between.
pub fn chi0(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let a = h(2.0 - r);
        a / (a + h(r - 1.0))
    }
}

/// Low-frequency cutoff χ₀(|ξ|).
pub fn low_cutoff(r: f64) -> f64 {
    chi0(r)
}

/// Dyadic cutoff χ₀(|ξ|/2^k) − χ₀(|ξ|/2^{k−1}), supported in [2^{k−1}, 2^{k+1}].
pub fn dyadic_cutoff(k: i32, r: f64) -> f64 {
    chi0(r / 2f64.powi(k)) - chi0(r / 2f64.powi(k - 1))
}

pub fn dyadic_localize(profile: &FrequencyProfile, k: i32) -> Result<FrequencyProfile> {
    if k < 1 {
        return Err(domain("dyadic scale k must be >= 1"));
    }
    if profile.localization.is_some() {
        return Err(domain("profile is already localized"));
    }
    let mut p = profile.clone();
    p.localization = Some(Localization::Annulus(k));
    Ok(p)
}

pub fn low_frequency_part(profile: &FrequencyProfile) -> Result<FrequencyProfile> {
    if profile.localization.is_some() {
        return Err(domain("profile is already localized"));
    }
    let mut p = profile.clone();
    p.localization = Some(Localization::Low);
    Ok(p)
}

pub fn fourier_eval(profile: &FrequencyProfile, eta: &[f64]) -> Result<Complex64> {
    if profile.family == Family::Bourgain {
        return Err(Error::Unsupported(
            "bourgain data is defined in physical space; use physical_eval".into(),
        ));
    }
    if eta.len() != profile.d {
        return Err(domain("frequency point has wrong dimension"));
    }
    let value = match profile.factors() {
        Ok(fs) => fs.iter().zip(eta).map(|(f, &e)| quadrature::factor_eval(f, e)).product(),
        Err(_) => {
            let base: f64 = profile
                .raw_factors()
                .iter()
                .zip(eta)
                .map(|(f, &e)| quadrature::factor_eval(f, e))
                .product();
            let r = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
            base * match profile.localization {
                Some(Localization::Annulus(k)) => dyadic_cutoff(k, r),
                _ => low_cutoff(r),
            }
        }
    };
    Ok(Complex64::new(value, 0.0))
}

/// f(x) = (2π)^{−d} ∫ e^{ix·ξ} f̂(ξ) dξ; bourgain data uses its product formula.
pub fn physical_eval(profile: &FrequencyProfile, x: &[f64], quad: &QuadratureSpec) -> Result<Complex64> {
    if x.len() != profile.d {
        return Err(domain("point has wrong dimension"));
    }
    if profile.family == Family::Bourgain {
        return bourgain_physical(profile, x, quad);
    }
    let (v, _) = propagator::fourier_value(&profile.factors()?, x, 0.0, 2.0, quad)?;
    Ok(v)
}

/// φ(y) = (2π)^{−1} ∫ e^{iyλ} π g(λ/2) dλ, with φ(0) = 1.
pub fn bourgain_phi(y: f64, quad: &QuadratureSpec) -> Result<f64> {
    let f = [Component {
        shape: Shape::Bump,
        center: 0.0,
        width: 2.0,
        amp: PI,
        lo: -1.0,
        hi: 1.0,
        multiplier: Multiplier::None,
    }];
    let (v, _) = quadrature::oscillatory_integral(&f, Phase { gamma: y, t: 0.0, m: 2.0 }, quad)?;
    Ok(v.re / (2.0 * PI))
}

fn bourgain_physical(profile: &FrequencyProfile, x: &[f64], quad: &QuadratureSpec) -> Result<Complex64> {
    let r = profile.r;
    let mut v = Complex64::from_polar(1.0, r * x[0]) * bourgain_phi(r.sqrt() * x[0], quad)?;
    if profile.d == 2 {
        let dd = profile.lattice_spacing();
        let lattice: Complex64 = profile
            .lattice_range()
            .into_iter()
            .map(|l| Complex64::from_polar(1.0, dd * l as f64 * x[1]))
            .sum();
        v *= lattice * bourgain_phi(x[1], quad)?;
    }
    Ok(v)
}

/// (∫ (1+|ξ|²)^s |f̂(ξ)|² dξ)^{1/2}, without the (2π)^{−d} prefactor.
pub fn sobolev_norm(profile: &FrequencyProfile, s: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(domain(format!("s = {s} must be finite and >= 0")));
    }
    let factors = profile.factors()?;
    if factors.iter().any(|f| f.is_empty()) {
        return Ok(0.0);
    }
    if factors.len() == 1 {
        let mass = quadrature::weighted_mass_1d(&factors[0], |xi| (1.0 + xi * xi).powf(s), quad)?;
        return Ok(mass.sqrt());
    }
    if s == 0.0 {
        let mut total = 1.0;
        for f in &factors {
            total *= quadrature::weighted_mass_1d(f, |_| 1.0, quad)?;
        }
        return Ok(total.sqrt());
    }
    let eval = |n: usize| {
        let tables: Vec<_> = factors.iter().map(|f| quadrature::tabulate(f, n, quad)).collect();
        tensor_sum(&tables, 0, 1.0, 1.0, s)
    };
    Ok(quadrature::converge(eval, quad)?.sqrt())
}

fn tensor_sum(tables: &[Vec<(f64, f64, f64)>], j: usize, radius_sq: f64, weight: f64, s: f64) -> f64 {
    if j == tables.len() {
        return weight * radius_sq.powf(s);
    }
    tables[j]
        .iter()
        .filter(|e| e.2 != 0.0)
        .map(|&(xi, w, v)| tensor_sum(tables, j + 1, radius_sq + xi * xi, weight * w * v * v, s))
        .sum()
}
