//! Kelly betting at even odds on an event of probability `½ + δ`, to first
//! order in `δ` and the staked fraction `a`.
//!
//! Staking `a` gives growth rate `2aδ − a²/2`, maximised at `a = 2δ` with
//! rate `2δ²`. A bettor who only sees `δ_perc = δ + ξ` stakes
//! `max(0, 2δ_perc)`, which yields `2(δ² − ξ²)` when `ξ > −δ` and 0 otherwise.

use crate::error::{Error, Result};
use crate::numerics::mc::{simulate, Estimate};
use crate::numerics::noise::ErrorModel;
use crate::numerics::rng::RngStream;
use crate::numerics::special::{std_normal_cdf, std_normal_pdf};

/// Largest `|δ|` accepted; beyond it the first-order expansion is meaningless.
pub const MAX_EDGE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KellySetting {
    pub delta_true: f64,
    /// rms of ξ in `δ_perc = δ_true + ξ`.
    pub sigma: f64,
}

impl KellySetting {
    pub fn new(delta_true: f64, sigma: f64) -> Result<Self> {
        if !(delta_true.abs() <= MAX_EDGE) {
            return Err(Error::domain(format!(
                "edge delta must satisfy |delta| <= {MAX_EDGE}, got {delta_true}"
            )));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be nonnegative, got {sigma}")));
        }
        Ok(Self { delta_true, sigma })
    }
}

/// `2aδ − a²/2`.
pub fn growth_rate(a: f64, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain(format!("fraction must lie in [0, 1], got {a}")));
    }
    Ok(2.0 * a * delta - a * a / 2.0)
}

/// `max(0, 2δ_perc)`.
pub fn optimal_fraction(delta_perc: f64) -> f64 {
    (2.0 * delta_perc).max(0.0)
}

/// `S(y) = E[Z²; Z > y] = yφ(y) + Φ(−y)` for standard Normal `Z`.
pub fn s_tail(y: f64) -> f64 {
    if y == f64::NEG_INFINITY {
        return 1.0;
    }
    if y == f64::INFINITY {
        return 0.0;
    }
    y * std_normal_pdf(y) + std_normal_cdf(-y)
}

/// `2(δ² − σ²)Φ(δ/σ) + 2σδφ(δ/σ)`; at `σ = 0` the limit `2δ²·1(δ > 0)`.
pub fn expected_growth(setting: &KellySetting) -> f64 {
    let (d, s) = (setting.delta_true, setting.sigma);
    if s == 0.0 {
        return if d > 0.0 { 2.0 * d * d } else { 0.0 };
    }
    let z = d / s;
    2.0 * (d * d - s * s) * std_normal_cdf(z) + 2.0 * s * d * std_normal_pdf(z)
}

fn piecewise_growth(delta: f64, xi: f64) -> f64 {
    if xi > -delta {
        2.0 * (delta * delta - xi * xi)
    } else {
        0.0
    }
}

/// Monte Carlo average of the piecewise growth with `ξ ~ Normal(0, σ²)`.
pub fn simulate_expected_growth(setting: &KellySetting, reps: u64, stream: &RngStream) -> Result<Estimate> {
    let noise = ErrorModel::normal(setting.sigma)?;
    let d = setting.delta_true;
    simulate(reps, stream, |rng| piecewise_growth(d, noise.sample(rng)))
}

/// Growth under an arbitrary staking rule `a = policy(δ_perc)`, clamped to
/// `[0, 1]`. No rule is claimed to beat [`optimal_fraction`].
pub fn simulate_policy_growth<P>(setting: &KellySetting, policy: P, reps: u64, stream: &RngStream) -> Result<Estimate>
where
    P: Fn(f64) -> f64 + Sync,
{
    let noise = ErrorModel::normal(setting.sigma)?;
    let d = setting.delta_true;
    simulate(reps, stream, |rng| {
        let a = policy(d + noise.sample(rng)).clamp(0.0, 1.0);
        2.0 * a * d - a * a / 2.0
    })
}
