//! Random one-dimensional projection scan for multivariate data.
//!
//! Rows are projected onto directions drawn uniformly from the unit sphere;
//! the direction whose projection has the largest cluster index wins. The
//! reported p-value is the per-direction Gumbel value and is not corrected
//! for the number of directions tried.

use serde::{Deserialize, Serialize};

use crate::decomposition::{ClusterSplit, cluster_split};
use crate::error::{Error, Result};
use crate::gumbel::{GumbelTest, cluster_test};
use crate::montecarlo::substream;
use crate::spacings::Sample;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionScan {
    /// Unit vector of the winning direction.
    pub direction: Vec<f64>,
    /// 0-based index of the winning direction among those drawn.
    pub direction_index: usize,
    pub split: ClusterSplit,
    pub test: GumbelTest,
    pub directions_tried: usize,
    /// Directions whose projection was constant.
    pub directions_skipped: usize,
    /// Projected values along the winning direction, in row order.
    pub projected: Vec<f64>,
}

fn project(rows: &[Vec<f64>], direction: &[f64]) -> Vec<f64> {
    rows.iter()
        .map(|r| r.iter().zip(direction).map(|(a, b)| a * b).sum())
        .collect()
}

/// Scans `directions` random directions drawn from `seed`. Direction `k`
/// comes from substream `(seed, k)`.
pub fn projection_scan(rows: &[Vec<f64>], directions: usize, seed: u64) -> Result<ProjectionScan> {
    let dim = rows.first().map_or(0, Vec::len);
    if dim < 2 {
        return Err(Error::Size { needed: 2, got: dim });
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
        return Err(Error::Data {
            line: None,
            detail: format!("row {bad} has {} columns, expected {dim}", rows[bad].len()),
        });
    }
    if rows.len() < 2 {
        return Err(Error::Size {
            needed: 2,
            got: rows.len(),
        });
    }
    if directions < 1 {
        return Err(Error::Usage("need at least one direction".into()));
    }

    let mut best: Option<(usize, Vec<f64>, Vec<f64>, ClusterSplit)> = None;
    let mut skipped = 0;
    for k in 0..directions {
        let direction = substream(seed, k as u64).next_unit_vector(dim);
        let projected = project(rows, &direction);
        let split = match Sample::new(&projected).and_then(|s| cluster_split(&s)) {
            Ok(split) => split,
            Err(Error::Degenerate(_)) => {
                eprintln!("warning: direction {k} gives a constant projection; skipped");
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|b| split.statistic > b.3.statistic) {
            best = Some((k, direction, projected, split));
        }
    }
    let (direction_index, direction, projected, split) =
        best.ok_or_else(|| Error::Degenerate("every projection was constant".into()))?;
    Ok(ProjectionScan {
        test: cluster_test(rows.len(), split.statistic)?,
        direction,
        direction_index,
        split,
        directions_tried: directions,
        directions_skipped: skipped,
        projected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs(n: usize, separation: f64, seed: u64) -> Vec<Vec<f64>> {
        let mut s = substream(seed, 10_000);
        (0..n)
            .map(|k| {
                let shift = if k % 2 == 0 { 0.0 } else { separation };
                vec![s.next_std_normal() + shift, s.next_std_normal()]
            })
            .collect()
    }

    #[test]
    fn deterministic() {
        let rows = blobs(60, 0.0, 1);
        let a = projection_scan(&rows, 1, 5).unwrap();
        let b = projection_scan(&rows, 1, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.directions_tried, 1);
    }

    #[test]
    fn identical_columns_are_affinely_equivalent() {
        let mut s = substream(3, 0);
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|_| {
                let v = s.next_std_normal();
                vec![v, v, v]
            })
            .collect();
        let direct = cluster_split(&Sample::new(&rows.iter().map(|r| r[0]).collect::<Vec<_>>()).unwrap()).unwrap();
        for seed in 0..10 {
            let scan = projection_scan(&rows, 1, seed).unwrap();
            assert!((scan.split.statistic - direct.statistic).abs() < 1e-10);
        }
    }

    #[test]
    fn separated_blobs_are_significant() {
        let rows = blobs(400, 8.0, 2);
        let scan = projection_scan(&rows, 100, 11).unwrap();
        assert!(scan.test.p_value < 0.01, "{:?}", scan.test);
        assert_eq!(scan.split.cluster1.len() + scan.split.cluster2.len(), 400);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(projection_scan(&[vec![1.0], vec![2.0]], 3, 0), Err(Error::Size { .. })));
        assert!(projection_scan(&[vec![1.0, 2.0], vec![2.0]], 3, 0).is_err());
        assert!(projection_scan(&[vec![1.0, 2.0], vec![2.0, 0.0]], 0, 0).is_err());
        let constant = vec![vec![1.0, 1.0]; 5];
        assert!(matches!(projection_scan(&constant, 3, 0), Err(Error::Degenerate(_))));
    }
}
