//! The standard mollifier g(ξ) = c·exp(−1/(1/4 − ξ²)) on (−1/2, 1/2), ∫g = 1.

/// Normalization constant c, fixed so that ∫g = 1.
pub const BUMP_NORM: f64 = 142.250_375_777_095_868_134_485;

/// ∫ g² dξ.
pub const BUMP_L2_SQ: f64 = 1.962_541_121_815_440_468_782;

/// Beyond |ω| ≥ X₀ the transform satisfies |ĝ(ω)| ≤ 1/4.
pub const DECAY_X0: f64 = 11.18;

#[inline]
pub fn bump_eval(xi: f64) -> f64 {
    let q = 0.25 - xi * xi;
    if q <= 0.0 {
        0.0
    } else {
        BUMP_NORM * (-1.0 / q).exp()
    }
}
