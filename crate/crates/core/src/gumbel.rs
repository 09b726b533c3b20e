//! Gumbel calibration of the cluster index.
//!
//! Under an i.i.d. normal sample, `n·Ĩ_n − log n` converges in law to the
//! standard Gumbel distribution, so large values of the centered statistic
//! are evidence of a cluster split.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, require_finite};

/// `exp(−exp(−x))`
pub fn gumbel_cdf(x: f64) -> Result<f64> {
    let x = require_finite("gumbel_cdf", x)?;
    Ok((-(-x).exp()).exp())
}

/// Upper tail `1 − exp(−exp(−x))`, evaluated as `−expm1(−e^{−x})` so that it
/// behaves like `e^{−x}` for large `x` instead of rounding to zero.
pub(crate) fn gumbel_sf(x: f64) -> f64 {
    -(-(-x).exp()).exp_m1()
}

/// `−log(−log p)` for `0 < p < 1`.
pub fn gumbel_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "gumbel_quantile",
            format!("p must lie in (0, 1), got {p}"),
        ));
    }
    Ok(-(-p.ln()).ln())
}

/// `exp(−0.5·exp(−x))`, the limit law of the one-sided maximum; its square is
/// the Gumbel CDF.
pub fn half_limit_cdf(x: f64) -> Result<f64> {
    let x = require_finite("half_limit_cdf", x)?;
    Ok((-0.5 * (-x).exp()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GumbelTest {
    pub n: usize,
    pub statistic: f64,
    /// `n·statistic − log n`
    pub x: f64,
    /// Asymptotic upper-tail p-value.
    pub p_value: f64,
}

/// Asymptotic significance of a cluster index `statistic ∈ (0, 1]` from a
/// sample of size `n`. No finite-n correction is applied.
pub fn cluster_test(n: usize, statistic: f64) -> Result<GumbelTest> {
    if n < 2 {
        return Err(Error::Size { needed: 2, got: n });
    }
    if !(statistic > 0.0 && statistic <= 1.0) {
        return Err(Error::domain(
            "cluster_test",
            format!("statistic must lie in (0, 1], got {statistic}"),
        ));
    }
    let nf = n as f64;
    let x = nf * statistic - nf.ln();
    Ok(GumbelTest {
        n,
        statistic,
        x,
        p_value: gumbel_sf(x),
    })
}
