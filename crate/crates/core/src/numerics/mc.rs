//! Replicated Monte Carlo with deterministic block splitting.
//!
//! Replications are cut into fixed-size blocks; block `b` draws from
//! [`RngStream::block`]`(b)`. Blocks may run on any number of threads, and
//! their running moments are merged in block order, so results are bitwise
//! identical regardless of scheduling.

use rayon::prelude::*;

use super::rng::{RngStream, StreamRng};
use crate::error::{Error, Result};

/// Replications per block.
pub const BLOCK_REPS: u64 = 1 << 15;

/// Mean and standard error of a replicated estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub reps: u64,
}

impl Estimate {
    /// `|mean − target| ≤ k·SE`, with a floor of a few ulps for the
    /// zero-variance case.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        let slack = 8.0 * f64::EPSILON * target.abs().max(self.mean.abs());
        (self.mean - target).abs() <= k * self.std_error + slack
    }

    /// `(mean − target) / SE`; zero when both the SE and the gap vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.mean - target;
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Welford running moments with Chan's pairwise merge.
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.n as f64 * w;
        self.n = n;
    }

    pub fn estimate(&self) -> Estimate {
        let se = if self.n > 1 {
            (self.m2.max(0.0) / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean: self.mean,
            std_error: se,
            reps: self.n,
        }
    }
}

/// Runs `reps` replications of `draw`, each returning `K` quantities, and
/// returns one [`Estimate`] per quantity.
pub fn simulate_many<const K: usize, F>(reps: u64, stream: &RngStream, draw: F) -> Result<[Estimate; K]>
where
    F: Fn(&mut StreamRng) -> [f64; K] + Sync,
{
    if reps == 0 {
        return Err(Error::domain("replication count must be at least 1"));
    }
    let blocks = reps.div_ceil(BLOCK_REPS);
    let partial: Vec<[Moments; K]> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_REPS.min(reps - b * BLOCK_REPS);
            let mut rng = stream.block(b);
            let mut acc = [Moments::default(); K];
            for _ in 0..n {
                let xs = draw(&mut rng);
                for (a, x) in acc.iter_mut().zip(xs) {
                    a.push(x);
                }
            }
            acc
        })
        .collect();
    let mut total = [Moments::default(); K];
    for block in &partial {
        for (t, m) in total.iter_mut().zip(block) {
            t.merge(m);
        }
    }
    Ok(total.map(|m| m.estimate()))
}

/// Single-quantity form of [`simulate_many`].
pub fn simulate<F>(reps: u64, stream: &RngStream, draw: F) -> Result<Estimate>
where
    F: Fn(&mut StreamRng) -> f64 + Sync,
{
    simulate_many(reps, stream, |rng| [draw(rng)]).map(|[e]| e)
}
