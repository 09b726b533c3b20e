//! Standard-normal primitives.
//!
//! The upper tail `1 − Φ(z)` is never formed by subtraction. Up to
//! [`TAIL_SWITCH`] it comes from `erfc`; beyond that from a continued fraction
//! for the Mills ratio `(1 − Φ(z)) / φ(z)`, which keeps full relative accuracy
//! in the far tail where Mills-ratio quantities are evaluated.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, require_finite};

/// 1/√(2π)
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Above this threshold the tail is evaluated through the continued fraction.
pub const TAIL_SWITCH: f64 = 6.0;

const CF_MAX_TERMS: usize = 2000;

// Unchecked kernels, used in hot Monte Carlo loops.

#[inline]
pub(crate) fn pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// `(1 − Φ(z)) / φ(z)` for `z ≥ TAIL_SWITCH`, by modified Lentz on
/// `1 / (z + 1/(z + 2/(z + 3/(z + …))))`.
fn tail_ratio_cf(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for k in 1..=CF_MAX_TERMS {
        let a = k as f64;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    1.0 / f
}

#[inline]
pub(crate) fn upper_tail(z: f64) -> f64 {
    if z > TAIL_SWITCH {
        pdf(z) * tail_ratio_cf(z)
    } else {
        0.5 * libm::erfc(z * FRAC_1_SQRT_2)
    }
}

/// `ln(1 − Φ(z))`, finite for every finite `z`.
pub(crate) fn ln_upper_tail(z: f64) -> f64 {
    if z > TAIL_SWITCH {
        -0.5 * z * z + INV_SQRT_2PI.ln() + tail_ratio_cf(z).ln()
    } else {
        upper_tail(z).ln()
    }
}

#[inline]
pub(crate) fn cdf(z: f64) -> f64 {
    upper_tail(-z)
}

#[inline]
pub(crate) fn mills(z: f64) -> f64 {
    if z > TAIL_SWITCH {
        1.0 / tail_ratio_cf(z)
    } else {
        pdf(z) / upper_tail(z)
    }
}

/// Acklam's rational approximation followed by one Halley step against the
/// accurate tail, which brings the result to working precision.
pub(crate) fn quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let x = if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    };

    // Residual measured on whichever side keeps it free of cancellation.
    let e = if p < 0.5 {
        cdf(x) - p
    } else {
        (1.0 - p) - upper_tail(x)
    };
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

// Checked public surface.

/// Standard normal density φ(z).
pub fn std_normal_pdf(z: f64) -> Result<f64> {
    Ok(pdf(require_finite("std_normal_pdf", z)?))
}

/// Standard normal distribution function Φ(z).
pub fn std_normal_cdf(z: f64) -> Result<f64> {
    Ok(cdf(require_finite("std_normal_cdf", z)?))
}

/// `1 − Φ(z)` without cancellation.
pub fn std_normal_upper_tail(z: f64) -> Result<f64> {
    Ok(upper_tail(require_finite("std_normal_upper_tail", z)?))
}

/// Φ⁻¹(p) for `0 < p < 1`.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "std_normal_quantile",
            format!("p must lie in (0, 1), got {p}"),
        ));
    }
    Ok(quantile(p))
}

/// Mills ratio φ(z) / (1 − Φ(z)), the mean of a standard normal truncated
/// below at `z`.
pub fn mills_ratio(z: f64) -> Result<f64> {
    Ok(mills(require_finite("mills_ratio", z)?))
}

/// Moments of the standard normal conditioned on exceeding `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedNormalMoments {
    pub threshold: f64,
    pub mean: f64,
    pub variance: f64,
    /// Third central moment over `variance^{3/2}`.
    pub skewness: f64,
}

/// Closed-form moments of `Z | Z > z`.
///
/// With `λ = mills(z)` and `δ = λ − z`, the raw-moment recursion
/// `E[Zᵏ] = (k−1)E[Zᵏ⁻²] + zᵏ⁻¹λ` reduces to
/// `var = 1 − λδ` and `μ₃ = λ(δ² − var)`.
pub fn truncated_moments(z: f64) -> Result<TruncatedNormalMoments> {
    let z = require_finite("truncated_moments", z)?;
    let lambda = mills(z);
    let delta = lambda - z;
    let variance = 1.0 - lambda * delta;
    let third = lambda * (delta * delta - variance);
    Ok(TruncatedNormalMoments {
        threshold: z,
        mean: lambda,
        variance,
        skewness: third / variance.powf(1.5),
    })
}
