//! Points of the Poisson process on ℝ with intensity `e^(−x)`, largest first.
//!
//! With Γ_k the partial sums of unit exponentials, `X_(k) = −ln Γ_k`: the
//! number of points above `x` is Poisson with mean `e^(−x)`, so the spacings
//! of `e^(−X)` are i.i.d. Exp(1). The top point is standard Gumbel.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::rng::RngStream;
use crate::error::{Error, Result};

/// Lazy descending sequence `X_(1) > X_(2) > …`.
pub struct DescendingPoints<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    gamma: f64,
}

impl<'a, R: Rng + ?Sized> DescendingPoints<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        Self { rng, gamma: 0.0 }
    }
}

impl<R: Rng + ?Sized> Iterator for DescendingPoints<'_, R> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let e: f64 = Exp1.sample(self.rng);
        self.gamma += e;
        Some(-self.gamma.ln())
    }
}

/// All points within `stop_gap` of the top point, drawn from `rng`.
pub fn descending_within<R: Rng + ?Sized>(rng: &mut R, stop_gap: f64) -> Result<Vec<f64>> {
    if !(stop_gap > 0.0 && stop_gap.is_finite()) {
        return Err(Error::domain(format!("stop_gap must be positive, got {stop_gap}")));
    }
    let mut points = DescendingPoints::new(rng);
    let top = points.next().expect("infinite sequence");
    let mut out = vec![top];
    for x in points {
        if top - x > stop_gap {
            break;
        }
        out.push(x);
    }
    Ok(out)
}

/// As [`descending_within`], drawing from block 0 of `stream`.
pub fn sample_poisson_descending(stream: &RngStream, stop_gap: f64) -> Result<Vec<f64>> {
    descending_within(&mut stream.rng(), stop_gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::mc::simulate;
    use crate::numerics::special::gumbel_cdf;

    #[test]
    fn points_descend_and_respect_gap() {
        for id in 0..50 {
            let pts = sample_poisson_descending(&RngStream::new(3, id), 5.0).unwrap();
            assert!(pts.windows(2).all(|w| w[0] > w[1]));
            assert!(pts.iter().all(|&x| x >= pts[0] - 5.0));
        }
    }

    #[test]
    fn expected_count_within_gap() {
        // Given X1 = x the other points in the gap are Poisson with mean
        // e^(−x)(e^g − 1), and e^(−X1) ~ Exp(1), so the expected count is e^g.
        let g = 3.0;
        let est = simulate(200_000, &RngStream::new(8, 0), |rng| {
            descending_within(rng, g).unwrap().len() as f64
        })
        .unwrap();
        assert!(est.agrees_with(g.exp(), 4.0), "{est:?}");
    }

    #[test]
    fn rejects_bad_gap() {
        assert!(sample_poisson_descending(&RngStream::new(1, 1), 0.0).is_err());
        assert!(sample_poisson_descending(&RngStream::new(1, 1), f64::INFINITY).is_err());
    }

    #[test]
    fn top_point_is_gumbel() {
        let n = 100_000;
        let mut rng = RngStream::new(21, 0).rng();
        let mut tops: Vec<f64> = (0..n)
            .map(|_| DescendingPoints::new(&mut rng).next().unwrap())
            .collect();
        tops.sort_by(f64::total_cmp);
        let ks = tops
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let g = gumbel_cdf(x);
                (g - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - g).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS distance {ks}");
    }
}
