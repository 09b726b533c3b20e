//! Sorted samples, their consecutive spacings, and spacing order statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// A validated univariate sample held as its order statistics.
///
/// Prefix sums are taken over the values shifted by the sample mean, which
/// keeps segment-mean differences accurate when the data sit far from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    center: f64,
    /// `prefix[i]` = Σ_{k<i} (values[k] − center), length n + 1.
    prefix: Vec<f64>,
}

impl Sample {
    /// Sorts a copy of `raw`. Requires at least two finite values; ties are allowed.
    pub fn new(raw: &[f64]) -> Result<Self> {
        Self::from_vec(raw.to_vec())
    }

    pub fn from_vec(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Size {
                needed: 2,
                got: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data {
                line: None,
                detail: format!("observation {pos} is not finite ({})", values[pos]),
            });
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self::from_sorted_unchecked(values))
    }

    /// Caller guarantees `values` is sorted, finite and has length ≥ 2.
    pub(crate) fn from_sorted_unchecked(values: Vec<f64>) -> Self {
        let n = values.len() as f64;
        let center = compensated_sum(values.iter().copied()) / n;
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = CompensatedSum::default();
        prefix.push(0.0);
        for &v in &values {
            acc.add(v - center);
            prefix.push(acc.value());
        }
        Sample {
            values,
            center,
            prefix,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.center + self.prefix[self.len()] / self.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.len() - 1]
    }

    /// Order statistic `X_(i)`, 1-based.
    pub fn order_stat(&self, i: usize) -> Result<f64> {
        self.check_index(i, 1, self.len())?;
        Ok(self.values[i - 1])
    }

    /// Population variance `(1/n) Σ (X_i − X̄)²`.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        compensated_sum(self.values.iter().map(|&v| (v - mean) * (v - mean))) / self.len() as f64
    }

    /// Sum of `values[..i] − center`, i.e. the centered prefix sum of the `i`
    /// smallest observations.
    #[inline]
    pub(crate) fn centered_prefix(&self, i: usize) -> f64 {
        self.prefix[i]
    }

    pub(crate) fn centered_total(&self) -> f64 {
        self.prefix[self.len()]
    }

    /// Means of the `i` smallest and of the `n − i` largest observations,
    /// for `1 ≤ i ≤ n − 1`.
    pub fn segment_means(&self, i: usize) -> Result<(f64, f64)> {
        let n = self.len();
        self.check_index(i, 1, n - 1)?;
        let lower = self.center + self.prefix[i] / i as f64;
        let upper = self.center + (self.prefix[n] - self.prefix[i]) / (n - i) as f64;
        Ok((lower, upper))
    }

    /// The `n − 1` consecutive gaps `X_(i+1) − X_(i)`.
    pub fn spacings(&self) -> SpacingSet {
        let gaps: Vec<f64> = self.values.windows(2).map(|w| w[1] - w[0]).collect();
        let mut sorted_desc = gaps.clone();
        sorted_desc.sort_unstable_by(|a, b| b.total_cmp(a));
        SpacingSet {
            gaps,
            n: self.len(),
            sorted_desc,
        }
    }

    fn check_index(&self, i: usize, lo: usize, hi: usize) -> Result<()> {
        if i < lo || i > hi {
            Err(Error::Index { index: i, lo, hi })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingSet {
    gaps: Vec<f64>,
    n: usize,
    sorted_desc: Vec<f64>,
}

impl SpacingSet {
    /// `gaps()[i − 1]` is the spacing `S_i`.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Size of the sample the gaps came from.
    pub fn sample_size(&self) -> usize {
        self.n
    }

    pub fn sorted_desc(&self) -> &[f64] {
        &self.sorted_desc
    }

    /// The maximum spacing.
    pub fn max_spacing(&self) -> f64 {
        self.sorted_desc[0]
    }

    /// The k-th largest spacing, `1 ≤ k ≤ n − 1`.
    pub fn kth_max(&self, k: usize) -> Result<f64> {
        if k < 1 || k > self.gaps.len() {
            return Err(Error::Index {
                index: k,
                lo: 1,
                hi: self.gaps.len(),
            });
        }
        Ok(self.sorted_desc[k - 1])
    }
}
