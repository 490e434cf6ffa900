//! Two duelists walk toward each other with one shot each; a shot from
//! distance `x` hits with probability `min(ρ/x, 1)`, and whoever misses is
//! then shot at point-blank range.
//!
//! Each duelist knows their own `ρ` but sees the opponent's as `ρ + ξ`, and
//! plans to fire at the distance where the two hit probabilities sum to 1.

use crate::error::{Error, Result};
use crate::numerics::mc::{simulate, Estimate};
use crate::numerics::noise::{ErrorModel, Probability};
use crate::numerics::quadrature::QuadratureSpec;
use crate::numerics::rng::RngStream;
use crate::skill_game::logistic;

/// Largest probability that a perceived opponent ρ is nonpositive.
pub const MAX_NEGATIVE_PERCEPTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Duelist {
    pub rho: f64,
    /// Noise on this duelist's perception of the opponent's ρ.
    pub opponent_noise: ErrorModel,
}

impl Duelist {
    pub fn new(rho: f64, opponent_noise: ErrorModel) -> Result<Self> {
        check_rho(rho)?;
        Ok(Self { rho, opponent_noise })
    }

    /// [`expected_win_prob`] for `self` as A.
    pub fn win_prob_against(&self, other: &Duelist, method: &Method) -> Result<Estimate> {
        expected_win_prob(self.rho, other.rho, &self.opponent_noise, &other.opponent_noise, method)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 1.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("accuracy parameter rho must exceed 1, got {rho}")))
    }
}

fn hit(rho: f64, x: f64) -> f64 {
    if x <= rho {
        1.0
    } else {
        rho / x
    }
}

/// `min(ρ/x, 1)`.
pub fn hit_prob(rho: f64, x: f64) -> Result<Probability> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("distance must be positive, got {x}")));
    }
    if !(rho > 0.0) {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }
    Ok(Probability::new_unchecked(hit(rho, x)))
}

/// Distance `ρ_A + ρ_B` where `p_A(x) + p_B(x) = 1`.
pub fn crossing_distance(rho_a: f64, rho_b: f64) -> Result<f64> {
    check_rho(rho_a)?;
    check_rho(rho_b)?;
    Ok(rho_a + rho_b)
}

/// Solves `p_a(x) + p_b(x) = 1` by bisection on `[lo, hi]` for nonincreasing
/// hit-probability curves.
pub fn crossing_distance_general<A, B>(p_a: A, p_b: B, lo: f64, hi: f64, x_tol: f64) -> Result<f64>
where
    A: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let excess = |x: f64| p_a(x) + p_b(x) - 1.0;
    let (mut lo, mut hi) = (lo, hi);
    if !(lo < hi) || excess(lo) < 0.0 || excess(hi) > 0.0 {
        return Err(Error::domain(format!("[{lo}, {hi}] does not bracket the crossing")));
    }
    while hi - lo > x_tol {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ρ_A/(ρ_A + ρ_B)`.
pub fn win_prob_known(rho_a: f64, rho_b: f64) -> Result<Probability> {
    check_rho(rho_a)?;
    check_rho(rho_b)?;
    Ok(Probability::new_unchecked(rho_a / (rho_a + rho_b)))
}

/// `ln ρ`, the Bradley-Terry skill equivalent to accuracy `ρ`.
pub fn log_ability(rho: f64) -> f64 {
    rho.ln()
}

/// Inverse of [`log_ability`].
pub fn rho_from_log_ability(x: f64) -> f64 {
    x.exp()
}

/// [`win_prob_known`] through the logistic link.
pub fn win_prob_via_logistic(rho_a: f64, rho_b: f64) -> f64 {
    logistic(log_ability(rho_a) - log_ability(rho_b))
}

/// Probability that A wins once the perception errors are realised. Whoever
/// overestimates the opponent more fires first; a tie goes to A's branch.
pub fn duel_outcome_prob(rho_a: f64, rho_b: f64, xi_a: f64, xi_b: f64) -> Result<Probability> {
    check_rho(rho_a)?;
    check_rho(rho_b)?;
    let s = rho_a + rho_b;
    if !(s + xi_a > 0.0 && s + xi_b > 0.0) {
        return Err(Error::domain("planned firing distances must be positive"));
    }
    Ok(Probability::new_unchecked(outcome(rho_a, rho_b, xi_a, xi_b)))
}

fn outcome(rho_a: f64, rho_b: f64, xi_a: f64, xi_b: f64) -> f64 {
    let s = rho_a + rho_b;
    if xi_a >= xi_b {
        hit(rho_a, s + xi_a)
    } else {
        1.0 - hit(rho_b, s + xi_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Quadrature(QuadratureSpec),
    MonteCarlo { reps: u64, stream: RngStream },
}

/// Expected probability that A wins over independent `ξ_A ~ noise_a`,
/// `ξ_B ~ noise_b`. Quadrature results carry a zero standard error.
pub fn expected_win_prob(
    rho_a: f64,
    rho_b: f64,
    noise_a: &ErrorModel,
    noise_b: &ErrorModel,
    method: &Method,
) -> Result<Estimate> {
    check_rho(rho_a)?;
    check_rho(rho_b)?;
    for (noise, rho, who) in [(noise_a, rho_b, "A"), (noise_b, rho_a, "B")] {
        let p = noise.cdf(-rho);
        if !(p < MAX_NEGATIVE_PERCEPTION) {
            return Err(Error::domain(format!(
                "{who}'s perception of the opponent's rho is nonpositive with probability {p:.3e}"
            )));
        }
    }
    match *method {
        Method::Quadrature(spec) => {
            let mean = win_prob_quadrature(rho_a, rho_b, noise_a, noise_b, &spec)?;
            Ok(Estimate {
                mean,
                std_error: 0.0,
                reps: 0,
            })
        }
        Method::MonteCarlo { reps, stream } => {
            let (na, nb) = (*noise_a, *noise_b);
            simulate(reps, &stream, |rng| {
                let xa = na.sample(rng);
                let xb = nb.sample(rng);
                outcome(rho_a, rho_b, xa, xb)
            })
        }
    }
}

// With q = P(ξ_B < ξ_A) and I_X = E[hit(ρ_X, S + ξ_X) · P(ξ_other < ξ_X)],
// P(A wins) = I_A + (1 − q) − I_B. Swapping roles maps q to 1 − q and
// negates I_A − I_B, so the two answers sum to 1 up to rounding.
fn win_prob_quadrature(
    rho_a: f64,
    rho_b: f64,
    noise_a: &ErrorModel,
    noise_b: &ErrorModel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let s = rho_a + rho_b;
    if noise_a.is_degenerate() && noise_b.is_degenerate() {
        return Ok(rho_a / s);
    }
    let first_fire = |own: &ErrorModel, other: &ErrorModel, rho: f64| -> Result<f64> {
        let kinks = [rho - s, other.scale(), -other.scale()];
        own.expect(|xi| hit(rho, s + xi) * other.cdf(xi), &kinks, spec)
    };
    let i_a = first_fire(noise_a, noise_b, rho_a)?;
    let i_b = first_fire(noise_b, noise_a, rho_b)?;
    let q = if noise_a == noise_b {
        0.5
    } else {
        let kinks = [noise_b.scale(), -noise_b.scale()];
        noise_a.expect(|xi| noise_b.cdf(xi), &kinks, spec)?
    };
    Ok((1.0 - q) + (i_a - i_b))
}
