//! Reproducible random substreams.
//!
//! A substream is ChaCha8 keyed by the master seed with the ChaCha nonce set
//! to the replicate index, so replicate `r` sees the same variates no matter
//! which worker runs it or in what order.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::{Rng, SeedableRng};

use crate::normal;

#[derive(Debug, Clone)]
pub struct Substream {
    rng: ChaCha8Rng,
}

/// The stream for replicate `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> Substream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    Substream { rng }
}

impl Substream {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval (0, 1): 53 random bits centred in their cell.
    pub fn next_open01(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    /// One standard normal variate by inversion: exactly one uniform per draw.
    pub fn next_std_normal(&mut self) -> f64 {
        normal::quantile(self.next_open01())
    }

    /// Point drawn uniformly from the unit sphere in `dim` dimensions.
    pub fn next_unit_vector(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.next_std_normal()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }
}

/// `n` i.i.d. standard normal variates from `stream`.
pub fn sample_std_normal(stream: &mut Substream, n: usize) -> Vec<f64> {
    (0..n).map(|_| stream.next_std_normal()).collect()
}
