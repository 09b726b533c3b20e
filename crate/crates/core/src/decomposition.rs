//! Spacing decomposition of the sample variance and the cluster index.
//!
//! For sorted observations the population variance splits exactly as
//!
//! ```text
//! (1/n) Σ (X_i − X̄)² = Σ_{i=1}^{n−1} i(n−i)/n² · (X̄_[i+1,n] − X̄_[1,i]) · S_i
//! ```
//!
//! Dividing each term by the variance gives nonnegative components summing to
//! one. The largest of them is the cluster index; the split it picks separates
//! the `j` smallest from the `n − j` largest observations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacings::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    /// Split position `i`, 1-based.
    pub index: usize,
    /// `i(n − i)/n²`
    pub weight: f64,
    /// `X̄_[i+1,n] − X̄_[1,i]`
    pub mean_gap: f64,
    /// `X_(i+1) − X_(i)`
    pub spacing: f64,
    /// `weight · mean_gap · spacing`
    pub raw: f64,
    /// `raw / sample_variance`
    pub standardized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceDecomposition {
    pub n: usize,
    /// Population variance, denominator `n`.
    pub sample_variance: f64,
    pub components: Vec<Component>,
}

/// Inclusive 1-based range of order-statistic positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub first: usize,
    pub last: usize,
}

impl IndexRange {
    pub fn len(&self) -> usize {
        self.last + 1 - self.first
    }

    pub fn is_empty(&self) -> bool {
        self.last < self.first
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSplit {
    /// Index of the largest component (smallest such index on ties).
    pub j: usize,
    /// The cluster index, i.e. the largest standardized component.
    pub statistic: f64,
    /// `X_(j)`
    pub separator_low: f64,
    /// `X_(j+1)`
    pub separator_high: f64,
    pub cluster1: IndexRange,
    pub cluster2: IndexRange,
}

fn degenerate_check(sample: &Sample) -> Result<f64> {
    let variance = sample.variance();
    if variance > 0.0 && sample.max() > sample.min() {
        Ok(variance)
    } else {
        Err(Error::Degenerate(format!(
            "all {} observations equal {}",
            sample.len(),
            sample.min()
        )))
    }
}

/// `(weight, mean_gap, spacing)` for split `i`, from the centered prefix sums.
#[inline]
fn component_parts(sample: &Sample, i: usize) -> (f64, f64, f64) {
    let n = sample.len();
    let values = sample.values();
    let nf = n as f64;
    let fi = i as f64;
    let below = sample.centered_prefix(i);
    let above = sample.centered_total() - below;
    let mean_gap = (above / (nf - fi) - below / fi).max(0.0);
    let weight = fi * (nf - fi) / (nf * nf);
    (weight, mean_gap, values[i] - values[i - 1])
}

/// Full per-index decomposition. Fails on a constant sample.
pub fn decompose(sample: &Sample) -> Result<VarianceDecomposition> {
    let variance = degenerate_check(sample)?;
    let components = (1..sample.len())
        .map(|i| {
            let (weight, mean_gap, spacing) = component_parts(sample, i);
            let raw = weight * mean_gap * spacing;
            Component {
                index: i,
                weight,
                mean_gap,
                spacing,
                raw,
                standardized: raw / variance,
            }
        })
        .collect();
    Ok(VarianceDecomposition {
        n: sample.len(),
        sample_variance: variance,
        components,
    })
}

fn split_at(sample: &Sample, j: usize, statistic: f64) -> ClusterSplit {
    let values = sample.values();
    ClusterSplit {
        j,
        statistic,
        separator_low: values[j - 1],
        separator_high: values[j],
        cluster1: IndexRange { first: 1, last: j },
        cluster2: IndexRange {
            first: j + 1,
            last: sample.len(),
        },
    }
}

/// Picks the largest standardized component of `d` (first on ties) and the
/// split it induces on `sample`.
pub fn cluster_index(d: &VarianceDecomposition, sample: &Sample) -> Result<ClusterSplit> {
    if d.n != sample.len() || d.components.len() + 1 != d.n {
        return Err(Error::domain(
            "cluster_index",
            format!("decomposition of size {} does not match sample of size {}", d.n, sample.len()),
        ));
    }
    let best = d
        .components
        .iter()
        .fold(None::<&Component>, |best, c| match best {
            Some(b) if b.standardized >= c.standardized => Some(b),
            _ => Some(c),
        })
        .expect("n ≥ 2 gives at least one component");
    Ok(split_at(sample, best.index, best.standardized))
}

/// Same result as `cluster_index(&decompose(sample)?, sample)` without
/// materializing the components.
pub fn cluster_split(sample: &Sample) -> Result<ClusterSplit> {
    let variance = degenerate_check(sample)?;
    let mut j = 1;
    let mut best = f64::NEG_INFINITY;
    for i in 1..sample.len() {
        let (weight, mean_gap, spacing) = component_parts(sample, i);
        let standardized = weight * mean_gap * spacing / variance;
        if standardized > best {
            best = standardized;
            j = i;
        }
    }
    Ok(split_at(sample, j, best))
}
