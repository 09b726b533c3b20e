//! Power and calibration controls for the Gumbel cluster test.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::substream;
use crate::decomposition::cluster_split;
use crate::error::{Error, Result};
use crate::gumbel::cluster_test;
use crate::spacings::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum DataModel {
    /// i.i.d. N(0, 1)
    StandardNormal,
    /// Equal-weight mixture of N(0, 1) and N(separation, 1).
    LocationMixture { separation: f64 },
}

impl DataModel {
    fn draw(self, seed: u64, index: u64, n: usize) -> Vec<f64> {
        let mut stream = substream(seed, index);
        match self {
            DataModel::StandardNormal => (0..n).map(|_| stream.next_std_normal()).collect(),
            DataModel::LocationMixture { separation } => (0..n)
                .map(|_| {
                    let shift = if stream.next_open01() < 0.5 { 0.0 } else { separation };
                    stream.next_std_normal() + shift
                })
                .collect(),
        }
    }
}

/// Asymptotic cluster-test p-value of each of `reps` samples drawn from
/// `model`, in replicate order.
pub fn simulate_p_values(model: DataModel, n: usize, reps: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::Size { needed: 3, got: n });
    }
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let sample = Sample::from_vec(model.draw(seed, r, n))?;
            let split = cluster_split(&sample)?;
            Ok(cluster_test(n, split.statistic)?.p_value)
        })
        .collect()
}
