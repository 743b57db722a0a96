//! Sharp regularity thresholds s(δ) for rate-δ convergence along curves.
//!
//! Every law is piecewise affine in δ. Laws are built generically over
//! [`Scalar`] so the same code runs in `f64` and in exact rationals.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when classifying a point as lying on the threshold.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Field used to evaluate laws: `f64` for computation, `Ratio<i64>` for exact checks.
pub trait Scalar: Clone + PartialOrd + Debug + Num {
    fn frac(n: i64, d: i64) -> Self;
    fn as_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn frac(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Ratio<i64> {
    fn frac(n: i64, d: i64) -> Self {
        Ratio::new(n, d)
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    Lipschitz,
    Holder,
}

/// Which threshold law applies. Names describe the (m, α) region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    /// m = 2, Lipschitz in t, any dimension.
    NonTangential,
    /// m = 2, d = 1, α ∈ [1/2, 1).
    HolderUpper,
    /// m = 2, d = 1, α ∈ (0, 1/4].
    HolderLower,
    /// m = 2, d = 1, α ∈ (1/4, 1/2).
    HolderMiddle,
    /// m ∈ (0, 1), α ∈ (1/2, 1].
    SubUpper,
    /// m ∈ (0, 1), α ∈ (0, 1/2].
    SubLower,
    /// m > 1, α ∈ [1/m, 1].
    SuperUpper,
    /// m > 1, α ∈ (0, 1/(2m)].
    SuperLower,
    /// m > 1, α ∈ (1/(2m), min(1/2, 1/m)).
    SuperMiddle,
    /// m ∈ (1, 2), α ∈ [1/2, 1/m).
    SuperTransitional,
}

impl LawKind {
    pub const ALL: [LawKind; 10] = [
        LawKind::NonTangential,
        LawKind::HolderUpper,
        LawKind::HolderLower,
        LawKind::HolderMiddle,
        LawKind::SubUpper,
        LawKind::SubLower,
        LawKind::SuperUpper,
        LawKind::SuperLower,
        LawKind::SuperMiddle,
        LawKind::SuperTransitional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawKind::NonTangential => "non-tangential",
            LawKind::HolderUpper => "holder-upper",
            LawKind::HolderLower => "holder-lower",
            LawKind::HolderMiddle => "holder-middle",
            LawKind::SubUpper => "sub-upper",
            LawKind::SubLower => "sub-lower",
            LawKind::SuperUpper => "super-upper",
            LawKind::SuperLower => "super-lower",
            LawKind::SuperMiddle => "super-middle",
            LawKind::SuperTransitional => "super-transitional",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Regime {
    pub d: u32,
    pub alpha: f64,
    pub m: f64,
    pub smoothness: Smoothness,
}

impl Regime {
    pub fn new(d: u32, alpha: f64, m: f64, smoothness: Smoothness) -> Result<Self> {
        let r = Regime {
            d,
            alpha,
            m,
            smoothness,
        };
        r.validate()?;
        Ok(r)
    }

    /// Classical case: m = 2, Lipschitz when α = 1.
    pub fn schrodinger(d: u32, alpha: f64) -> Result<Self> {
        let smoothness = if alpha == 1.0 {
            Smoothness::Lipschitz
        } else {
            Smoothness::Holder
        };
        Regime::new(d, alpha, 2.0, smoothness)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Domain("d must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Domain(format!("alpha = {} not in (0, 1]", self.alpha)));
        }
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::Domain(format!("m = {} must be positive", self.m)));
        }
        if self.smoothness == Smoothness::Lipschitz && self.alpha != 1.0 {
            return Err(Error::Domain("Lipschitz smoothness requires alpha = 1".into()));
        }
        if self.m != 2.0 && self.d != 1 {
            return Err(Error::Domain("fractional dispersion (m != 2) requires d = 1".into()));
        }
        Ok(())
    }

    pub fn law_kind(&self) -> Result<LawKind> {
        self.validate()?;
        law_kind(self.d, self.alpha, self.m, self.smoothness)
    }

    pub fn law(&self) -> Result<RegimeLaw<f64>> {
        self.validate()?;
        RegimeLaw::build(self.d, self.alpha, self.m, self.smoothness)
    }

    /// Upper end of the admissible rate range.
    pub fn delta_max(&self) -> f64 {
        if self.m == 2.0 && (self.smoothness == Smoothness::Lipschitz || self.alpha == 1.0) {
            1.0
        } else {
            self.alpha
        }
    }
}

/// Core dispatch, generic so exact rationals select the same law as floats.
pub fn law_kind<T: Scalar>(d: u32, alpha: T, m: T, smoothness: Smoothness) -> Result<LawKind> {
    let one = T::one();
    let two = T::frac(2, 1);
    let half = T::frac(1, 2);
    let quarter = T::frac(1, 4);
    let lipschitz = smoothness == Smoothness::Lipschitz || alpha == one;
    if m == two {
        if lipschitz {
            return Ok(LawKind::NonTangential);
        }
        if d != 1 {
            return Err(Error::Unsupported(format!(
                "Hölder curves with alpha < 1 have no threshold law in d = {d}"
            )));
        }
        return Ok(if alpha >= half {
            LawKind::HolderUpper
        } else if alpha <= quarter {
            LawKind::HolderLower
        } else {
            LawKind::HolderMiddle
        });
    }
    if d != 1 {
        return Err(Error::Unsupported("fractional dispersion requires d = 1".into()));
    }
    if m < one {
        return Ok(if alpha > half {
            LawKind::SubUpper
        } else {
            LawKind::SubLower
        });
    }
    if m == one {
        return Err(Error::Unsupported("no threshold law for m = 1".into()));
    }
    let inv_m = one.clone() / m.clone();
    let inv_2m = inv_m.clone() / two.clone();
    let upper_mid = if half < inv_m { half.clone() } else { inv_m.clone() };
    if alpha >= inv_m {
        Ok(LawKind::SuperUpper)
    } else if alpha <= inv_2m {
        Ok(LawKind::SuperLower)
    } else if alpha < upper_mid {
        Ok(LawKind::SuperMiddle)
    } else if m < two && alpha >= half && alpha < inv_m {
        Ok(LawKind::SuperTransitional)
    } else {
        Err(Error::Unsupported("no threshold law covers this (alpha, m)".into()))
    }
}

/// One affine piece `s = slope·δ + intercept` on `[start, end)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece<T> {
    pub start: T,
    pub end: T,
    pub slope: T,
    pub intercept: T,
}

impl<T: Scalar> Piece<T> {
    pub fn eval(&self, delta: &T) -> T {
        self.slope.clone() * delta.clone() + self.intercept.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeLaw<T> {
    pub kind: LawKind,
    pub delta_max: T,
    pub pieces: Vec<Piece<T>>,
}

impl<T: Scalar> RegimeLaw<T> {
    pub fn build(d: u32, alpha: T, m: T, smoothness: Smoothness) -> Result<Self> {
        let kind = law_kind(d, alpha.clone(), m.clone(), smoothness)?;
        Ok(Self::from_kind(kind, d, alpha, m))
    }

    /// The pieces of `kind` evaluated at (d, α, m), without checking that
    /// `kind` is the law the dispatch would select there.
    pub fn from_kind(kind: LawKind, d: u32, alpha: T, m: T) -> Self {
        let zero = T::zero();
        let one = T::one();
        let two = T::frac(2, 1);
        let half = T::frac(1, 2);
        let quarter = T::frac(1, 4);
        let a = alpha;
        let p = |start: &T, end: &T, slope: T, intercept: T| Piece {
            start: start.clone(),
            end: end.clone(),
            slope,
            intercept,
        };
        let a_half = a.clone() / two.clone();
        let inv_a = one.clone() / a.clone();
        // m δ + (1 − mα)/2
        let mid_intercept = (one.clone() - m.clone() * a.clone()) / two.clone();
        let (delta_max, raw) = match kind {
            LawKind::NonTangential => {
                let dd = T::frac(d as i64, 1);
                let b = dd.clone() / (two.clone() * (dd + one.clone()));
                (
                    one.clone(),
                    vec![
                        p(&zero, &b, one.clone(), b.clone()),
                        p(&b, &one, two.clone(), zero.clone()),
                    ],
                )
            }
            LawKind::HolderUpper => (
                a.clone(),
                vec![
                    p(&zero, &quarter, one.clone(), quarter.clone()),
                    p(&quarter, &a, two.clone(), zero.clone()),
                ],
            ),
            LawKind::HolderLower => (
                a.clone(),
                vec![
                    p(&zero, &a_half, two.clone(), half.clone() - a.clone()),
                    p(&a_half, &a, inv_a.clone(), zero.clone()),
                ],
            ),
            LawKind::HolderMiddle => {
                let b = a.clone() - quarter.clone();
                (
                    a.clone(),
                    vec![
                        p(&zero, &b, one.clone(), quarter.clone()),
                        p(&b, &a_half, two.clone(), half.clone() - a.clone()),
                        p(&a_half, &a, inv_a.clone(), zero.clone()),
                    ],
                )
            }
            LawKind::SubUpper => {
                let b = (two.clone() * a.clone() - one.clone()) / T::frac(4, 1);
                (
                    a.clone(),
                    vec![
                        p(&zero, &b, zero.clone(), (two.clone() - m.clone()) / T::frac(4, 1)),
                        p(&b, &a_half, m.clone(), mid_intercept.clone()),
                        p(&a_half, &a, inv_a.clone(), zero.clone()),
                    ],
                )
            }
            LawKind::SubLower | LawKind::SuperLower => (
                a.clone(),
                vec![
                    p(&zero, &a_half, m.clone(), mid_intercept.clone()),
                    p(&a_half, &a, inv_a.clone(), zero.clone()),
                ],
            ),
            LawKind::SuperUpper => (
                a.clone(),
                vec![
                    p(&zero, &quarter, m.clone() - one.clone(), quarter.clone()),
                    p(&quarter, &a, m.clone(), zero.clone()),
                ],
            ),
            LawKind::SuperMiddle | LawKind::SuperTransitional => {
                let b = (two.clone() * m.clone() * a.clone() - one.clone()) / T::frac(4, 1);
                if b <= a_half {
                    (
                        a.clone(),
                        vec![
                            p(&zero, &b, m.clone() - one.clone(), quarter.clone()),
                            p(&b, &a_half, m.clone(), mid_intercept.clone()),
                            p(&a_half, &a, inv_a.clone(), zero.clone()),
                        ],
                    )
                } else {
                    // For m > 2 and α > 1/(2(m−1)) the stated ranges overlap and the
                    // middle piece disappears; the law is the maximum of the outer
                    // pieces, which cross at α/(4(1 − (m−1)α)) when that is positive.
                    let den = one.clone() - (m.clone() - one.clone()) * a.clone();
                    let cross = if den > zero {
                        a.clone() / (T::frac(4, 1) * den)
                    } else {
                        a.clone()
                    };
                    (
                        a.clone(),
                        vec![
                            p(&zero, &cross, m.clone() - one.clone(), quarter.clone()),
                            p(&cross, &a, inv_a.clone(), zero.clone()),
                        ],
                    )
                }
            }
        };
        let mut pieces = Vec::with_capacity(raw.len());
        for mut piece in raw {
            if piece.start >= delta_max {
                continue;
            }
            if piece.end > delta_max {
                piece.end = delta_max.clone();
            }
            if piece.start < piece.end {
                pieces.push(piece);
            }
        }
        if let Some(last) = pieces.last_mut() {
            last.end = delta_max.clone();
        }
        RegimeLaw {
            kind,
            delta_max,
            pieces,
        }
    }

    /// Interior piece boundaries.
    pub fn breakpoints(&self) -> Vec<T> {
        self.pieces.iter().skip(1).map(|p| p.start.clone()).collect()
    }

    pub fn piece_index(&self, delta: &T) -> Result<usize> {
        if *delta < T::zero() || *delta >= self.delta_max {
            return Err(Error::Range(format!(
                "delta = {:?} outside [0, {:?}) (delta_max = {:?})",
                delta.as_f64(),
                self.delta_max.as_f64(),
                self.delta_max.as_f64()
            )));
        }
        Ok(self
            .pieces
            .iter()
            .position(|p| *delta < p.end)
            .unwrap_or(self.pieces.len() - 1))
    }

    pub fn threshold(&self, delta: &T) -> Result<T> {
        let i = self.piece_index(delta)?;
        Ok(self.pieces[i].eval(delta))
    }

    /// Graph annotations: the s-intercept, every corner (δ, s), and the δ ceiling.
    pub fn annotations(&self) -> Annotations<T> {
        let zero = T::zero();
        Annotations {
            intercept: self.pieces[0].eval(&zero),
            corners: self
                .pieces
                .iter()
                .skip(1)
                .map(|p| Corner {
                    delta: p.start.clone(),
                    s: p.eval(&p.start),
                })
                .collect(),
            ceiling: self.delta_max.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corner<T> {
    pub delta: T,
    pub s: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotations<T> {
    pub intercept: T,
    pub corners: Vec<Corner<T>>,
    pub ceiling: T,
}

/// Middle piece of the transitional law in its alternative closed form
/// `(m−1)δ/(1−α) + (1−mα)/(4(1−α))`. It touches the envelope only at the
/// two outer breakpoints and never exceeds it.
pub fn transitional_alternative_middle<T: Scalar>(alpha: T, m: T, delta: T) -> T {
    let one = T::one();
    let den = one.clone() - alpha.clone();
    (m.clone() - one.clone()) * delta / den.clone()
        + (one - m * alpha) / (T::frac(4, 1) * den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub s: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    AboveThreshold,
    BelowThreshold,
    OnBoundary,
}

pub fn threshold(regime: &Regime, delta: f64) -> Result<f64> {
    regime.law()?.threshold(&delta)
}

pub fn classify(regime: &Regime, point: RatePoint) -> Result<Classification> {
    if !(point.s.is_finite() && point.s >= 0.0) {
        return Err(Error::Domain(format!("s = {} must be finite and non-negative", point.s)));
    }
    let s_c = threshold(regime, point.delta)?;
    Ok(if (point.s - s_c).abs() <= BOUNDARY_TOL {
        Classification::OnBoundary
    } else if point.s > s_c {
        Classification::AboveThreshold
    } else {
        Classification::BelowThreshold
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaGrid {
    pub delta_min: f64,
    pub delta_max: f64,
    pub steps: usize,
}

impl DeltaGrid {
    pub fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.delta_min],
            n => (0..n)
                .map(|i| {
                    self.delta_min + (self.delta_max - self.delta_min) * i as f64 / (n - 1) as f64
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSample {
    pub delta: f64,
    pub s: f64,
    pub piece: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCurve {
    pub law: LawKind,
    pub samples: Vec<RegionSample>,
    pub annotations: Annotations<f64>,
}

pub fn region_curve(regime: &Regime, grid: &DeltaGrid) -> Result<RegionCurve> {
    let law = regime.law()?;
    let samples = grid
        .points()
        .into_iter()
        .map(|delta| {
            let piece = law.piece_index(&delta)?;
            Ok(RegionSample {
                delta,
                s: law.pieces[piece].eval(&delta),
                piece,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionCurve {
        law: law.kind,
        samples,
        annotations: law.annotations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn documented_values() {
        let lip = Regime::new(1, 1.0, 2.0, Smoothness::Lipschitz).unwrap();
        assert_eq!(threshold(&lip, 0.0).unwrap(), 0.25);
        assert_eq!(threshold(&lip, 0.5).unwrap(), 1.0);
        let h = Regime::new(1, 0.2, 2.0, Smoothness::Holder).unwrap();
        assert!((threshold(&h, 0.0).unwrap() - 0.3).abs() < 1e-15);
        let h = Regime::new(1, 0.3, 2.0, Smoothness::Holder).unwrap();
        assert!((threshold(&h, 0.1).unwrap() - 0.4).abs() < 1e-15);
        let f = Regime::new(1, 0.8, 0.5, Smoothness::Holder).unwrap();
        assert!((threshold(&f, 0.0).unwrap() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn range_error_names_delta_max() {
        let h = Regime::new(1, 0.3, 2.0, Smoothness::Holder).unwrap();
        let e = threshold(&h, 0.3).unwrap_err();
        assert!(matches!(e, Error::Range(ref m) if m.contains("0.3")));
        assert!(threshold(&h, -0.01).is_err());
    }

    #[test]
    fn unsupported_cases() {
        assert!(matches!(
            Regime::new(1, 0.5, 1.0, Smoothness::Holder).unwrap().law(),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            Regime::new(2, 0.5, 2.0, Smoothness::Holder).unwrap().law(),
            Err(Error::Unsupported(_))
        ));
        assert!(Regime::new(2, 0.5, 3.0, Smoothness::Holder).is_err());
        assert!(Regime::new(1, 0.5, 2.0, Smoothness::Lipschitz).is_err());
    }

    #[test]
    fn classify_examples() {
        let lip = Regime::new(1, 1.0, 2.0, Smoothness::Lipschitz).unwrap();
        let c = |reg: &Regime, s, delta| classify(reg, RatePoint { s, delta }).unwrap();
        assert_eq!(c(&lip, 0.5, 0.1), Classification::AboveThreshold);
        assert_eq!(c(&lip, 0.25, 0.0), Classification::OnBoundary);
        let h = Regime::new(1, 0.2, 2.0, Smoothness::Holder).unwrap();
        assert_eq!(c(&h, 0.2, 0.05), Classification::BelowThreshold);
    }

    #[test]
    fn exact_dispatch_matches_float() {
        let cases = [
            (r(1, 5), r(2, 1), LawKind::HolderLower),
            (r(1, 4), r(2, 1), LawKind::HolderLower),
            (r(3, 10), r(2, 1), LawKind::HolderMiddle),
            (r(1, 2), r(2, 1), LawKind::HolderUpper),
            (r(3, 4), r(1, 2), LawKind::SubUpper),
            (r(1, 2), r(1, 2), LawKind::SubLower),
            (r(1, 3), r(3, 1), LawKind::SuperUpper),
            (r(1, 6), r(3, 1), LawKind::SuperLower),
            (r(1, 4), r(3, 1), LawKind::SuperMiddle),
            (r(3, 5), r(3, 2), LawKind::SuperTransitional),
        ];
        for (a, m, want) in cases {
            let exact = law_kind(1, a, m, Smoothness::Holder).unwrap();
            let float = law_kind(1, a.as_f64(), m.as_f64(), Smoothness::Holder).unwrap();
            assert_eq!(exact, want);
            assert_eq!(float, want);
        }
    }

    #[test]
    fn region_curve_example() {
        let h = Regime::new(1, 0.2, 2.0, Smoothness::Holder).unwrap();
        let grid = DeltaGrid {
            delta_min: 0.0,
            delta_max: 0.15,
            steps: 4,
        };
        let curve = region_curve(&h, &grid).unwrap();
        let s: Vec<f64> = curve.samples.iter().map(|p| p.s).collect();
        for (got, want) in s.iter().zip([0.3, 0.4, 0.5, 0.75]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let empty = DeltaGrid {
            delta_min: 0.0,
            delta_max: 0.1,
            steps: 0,
        };
        assert!(region_curve(&h, &empty).unwrap().samples.is_empty());
    }
}
