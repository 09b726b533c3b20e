//! Deterministic replication engine for the cluster-index limit laws.
//!
//! Every replicate draws its normals from its own substream, replicates run on
//! the ambient rayon pool, and results are merged by replicate index. A report
//! is therefore a pure function of its configuration; the number of worker
//! threads does not change a single bit of it.

pub mod controls;
pub mod ecdf;
pub mod lemmas;
pub mod rng;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::cluster_split;
use crate::error::{Error, Result};
use crate::gumbel::{gumbel_cdf, half_limit_cdf};
use crate::normal;
use crate::spacings::Sample;

pub use ecdf::{empirical_cdf, ks_critical_1pct, ks_distance};
pub use rng::{Substream, sample_std_normal, substream};

/// Default evaluation grid: −2 to 6 in steps of 0.5.
pub fn default_grid() -> Vec<f64> {
    (0..=16).map(|k| -2.0 + 0.5 * k as f64).collect()
}

/// Quantile levels reported with every simulation.
pub const REPORT_LEVELS: [f64; 7] = [0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99];

/// Largest tolerated fraction of degenerate replicates.
pub const MAX_EXCLUDED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub grid: Vec<f64>,
}

impl SimConfig {
    pub fn new(n: usize, reps: usize, seed: u64, grid: Vec<f64>) -> Result<Self> {
        let cfg = SimConfig { n, reps, seed, grid };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Size {
                needed: 2,
                got: self.n,
            });
        }
        if self.reps < 1 {
            return Err(Error::domain("SimConfig", "reps must be at least 1"));
        }
        if self.grid.is_empty() || self.grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::domain("SimConfig", "grid must be nonempty and finite"));
        }
        if self.grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("SimConfig", "grid must be sorted ascending"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// `exp(−exp(−x))`
    Gumbel,
    /// `exp(−0.5·exp(−x))`
    HalfLimit,
}

impl Reference {
    pub fn cdf(self, x: f64) -> f64 {
        match self {
            Reference::Gumbel => gumbel_cdf(x),
            Reference::HalfLimit => half_limit_cdf(x),
        }
        .unwrap_or(if x > 0.0 { 1.0 } else { 0.0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantilePoint {
    pub level: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub config: SimConfig,
    /// What was recorded per replicate.
    pub statistic: String,
    pub reference: Reference,
    pub empirical_cdf: Vec<f64>,
    pub reference_cdf: Vec<f64>,
    pub ks_distance: f64,
    pub quantiles: Vec<QuantilePoint>,
    /// Degenerate replicates left out of every summary above.
    pub excluded: usize,
}

/// Runs `f` on the sorted normals of each replicate, in parallel, returning
/// results in replicate order.
pub(crate) fn run_replicates<T, F>(n: usize, reps: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[f64]) -> T + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut stream = substream(seed, r);
            let mut z = sample_std_normal(&mut stream, n);
            z.sort_unstable_by(f64::total_cmp);
            f(&z)
        })
        .collect()
}

fn check_exclusions(excluded: usize, reps: usize, reason: &'static str) -> Result<()> {
    if excluded as f64 > MAX_EXCLUDED_FRACTION * reps as f64 {
        Err(Error::TooManyExclusions {
            excluded,
            reps,
            reason,
        })
    } else {
        Ok(())
    }
}

fn build_report(
    config: &SimConfig,
    statistic: &str,
    reference: Reference,
    outcomes: Vec<Option<f64>>,
    reason: &'static str,
) -> Result<MonteCarloReport> {
    let excluded = outcomes.iter().filter(|o| o.is_none()).count();
    check_exclusions(excluded, config.reps, reason)?;
    let mut values: Vec<f64> = outcomes.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(Error::TooManyExclusions {
            excluded,
            reps: config.reps,
            reason,
        });
    }
    values.sort_unstable_by(f64::total_cmp);
    let empirical = empirical_cdf(&values, &config.grid)?;
    let reference_cdf = config.grid.iter().map(|&x| reference.cdf(x)).collect();
    let ks = ks_distance(&values, |x| reference.cdf(x))?;
    let quantiles = REPORT_LEVELS
        .iter()
        .map(|&level| QuantilePoint {
            level,
            value: ecdf::quantile_sorted(&values, level),
        })
        .collect();
    Ok(MonteCarloReport {
        config: config.clone(),
        statistic: statistic.to_string(),
        reference,
        empirical_cdf: empirical,
        reference_cdf,
        ks_distance: ks,
        quantiles,
        excluded,
    })
}

/// Centered cluster index `n·Ĩ_n − log n` of one sorted normal sample.
pub(crate) fn centered_cluster_index(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len() as f64;
    let sample = Sample::from_sorted_unchecked(sorted.to_vec());
    cluster_split(&sample)
        .ok()
        .map(|split| n * split.statistic - n.ln())
}

/// Largest `(n − i)(Z_(i+1) − Z_(i))·mills(Z_(i))` over positive `Z_(i)`,
/// minus `log n`. `None` when no observation is positive.
pub(crate) fn centered_half_statistic(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    let start = sorted.partition_point(|&z| z <= 0.0);
    if start >= n {
        return None;
    }
    let mut best = f64::NEG_INFINITY;
    // 1-based i = k + 1 with Z_(i) = sorted[k] > 0, up to i = n − 1
    for k in start..n - 1 {
        let i = k + 1;
        let term = (n - i) as f64 * (sorted[k + 1] - sorted[k]) * normal::mills(sorted[k]);
        best = best.max(term);
    }
    if best == f64::NEG_INFINITY {
        // only Z_(n) is positive; the maximum over an empty index set is 0
        best = 0.0;
    }
    Some(best - (n as f64).ln())
}

/// Empirical law of `n·Ĩ_n − log n` under i.i.d. N(0, 1), against the Gumbel CDF.
pub fn simulate_cluster_statistic(cfg: &SimConfig) -> Result<MonteCarloReport> {
    cfg.validate()?;
    if cfg.n < 3 {
        return Err(Error::Size {
            needed: 3,
            got: cfg.n,
        });
    }
    let outcomes = run_replicates(cfg.n, cfg.reps, cfg.seed, centered_cluster_index);
    build_report(cfg, "cluster_index", Reference::Gumbel, outcomes, "zero-variance sample")
}

/// Empirical law of the positive-side maximum against `exp(−0.5·exp(−x))`.
pub fn simulate_half_statistic(cfg: &SimConfig) -> Result<MonteCarloReport> {
    cfg.validate()?;
    let outcomes = run_replicates(cfg.n, cfg.reps, cfg.seed, centered_half_statistic);
    build_report(
        cfg,
        "positive_half_maximum",
        Reference::HalfLimit,
        outcomes,
        "no positive observation",
    )
}
