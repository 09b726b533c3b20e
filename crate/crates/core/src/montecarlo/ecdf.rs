use crate::error::{Error, Result};

fn require_nonempty(what: &'static str, samples: &[f64]) -> Result<()> {
    if samples.is_empty() {
        Err(Error::domain(what, "sample list is empty"))
    } else {
        Ok(())
    }
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Fraction of `samples` at or below each point of the ascending `grid`.
pub fn empirical_cdf(samples: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    require_nonempty("empirical_cdf", samples)?;
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("empirical_cdf", "grid must be sorted ascending"));
    }
    let xs = sorted(samples);
    let n = xs.len() as f64;
    Ok(grid
        .iter()
        .map(|&g| xs.partition_point(|&x| x <= g) as f64 / n)
        .collect())
}

/// One-sample Kolmogorov–Smirnov distance
/// `sup_i max(|i/N − F(x_(i))|, |(i−1)/N − F(x_(i))|)`.
pub fn ks_distance(samples: &[f64], reference_cdf: impl Fn(f64) -> f64) -> Result<f64> {
    require_nonempty("ks_distance", samples)?;
    let xs = sorted(samples);
    let n = xs.len() as f64;
    Ok(xs.iter().enumerate().fold(0.0_f64, |acc, (k, &x)| {
        let f = reference_cdf(x);
        let above = (k + 1) as f64 / n - f;
        let below = f - k as f64 / n;
        acc.max(above.abs()).max(below.abs())
    }))
}

/// Asymptotic 1% critical value of the one-sample KS statistic for `n` points.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Linear-interpolation quantile (type 7) of ascending-sorted data.
pub(crate) fn quantile_sorted(xs: &[f64], p: f64) -> f64 {
    let h = (xs.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(xs.len() - 1);
    xs[lo] + (h - lo as f64) * (xs[hi] - xs[lo])
}
