//! Spacings-based cluster index for univariate samples.
//!
//! The sample variance of sorted data splits into one nonnegative term per
//! gap between consecutive order statistics. The largest standardized term,
//! `Ĩ_n`, marks the most pronounced two-group split, and under an i.i.d.
//! normal sample `n·Ĩ_n − log n` is asymptotically standard Gumbel. This
//! crate computes the decomposition, the split and its Gumbel p-value, and
//! ships a reproducible Monte Carlo engine that checks the limit law and the
//! tail bounds it rests on.
//!
//! ```
//! use gapdex::{Sample, cluster_split, cluster_test};
//!
//! let sample = Sample::new(&[0.0, 1.0, 2.0, 10.0]).unwrap();
//! let split = cluster_split(&sample).unwrap();
//! assert_eq!(split.j, 3);
//! let test = cluster_test(sample.len(), split.statistic).unwrap();
//! assert!(test.p_value > 0.0 && test.p_value < 1.0);
//! ```

pub mod bounds;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod gumbel;
pub mod montecarlo;
pub mod normal;
pub mod projection;
pub mod spacings;

pub use bounds::{InequalityCheck, eval_gap_bound, eval_mills_bounds, eval_ratio_bound, lemma31_bound};
pub use decomposition::{ClusterSplit, Component, VarianceDecomposition, cluster_index, cluster_split, decompose};
pub use error::{Error, Result};
pub use gumbel::{GumbelTest, cluster_test, gumbel_cdf, gumbel_quantile, half_limit_cdf};
pub use montecarlo::{MonteCarloReport, SimConfig, simulate_cluster_statistic, simulate_half_statistic};
pub use normal::{
    TruncatedNormalMoments, mills_ratio, std_normal_cdf, std_normal_pdf, std_normal_quantile,
    std_normal_upper_tail, truncated_moments,
};
pub use spacings::{Sample, SpacingSet};
