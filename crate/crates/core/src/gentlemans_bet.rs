//! Two people with different perceived probabilities bet at the midpoint.
//!
//! If A perceives `q_A` and B perceives `q_B`, they trade at
//! `r = (q_A + q_B)/2` and A buys `κ(q_A − r)` contracts (a negative number
//! means A sells). With true probability `p` the mean gain to A is
//! `κ(q_A − r)(p − r)`. Averaging over unbiased perception errors gives
//! `(κ/4)(σ_B² − σ_A²)`, whatever the dependence between the two errors.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::mc::{simulate, Estimate};
use crate::numerics::noise::{check_clamp_negligible, ErrorModel, Probability};
use crate::numerics::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPersonBet {
    pub q_a: Probability,
    pub q_b: Probability,
    pub p_true: Probability,
    /// Contracts traded per unit of perceived edge.
    pub kappa: f64,
}

impl TwoPersonBet {
    pub fn new(q_a: f64, q_b: f64, p_true: f64, kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        Ok(Self {
            q_a: Probability::new(q_a)?,
            q_b: Probability::new(q_b)?,
            p_true: Probability::new(p_true)?,
            kappa,
        })
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("affluence kappa must be positive, got {kappa}")))
    }
}

/// The trading price `(q_A + q_B)/2`.
pub fn mid_price(q_a: Probability, q_b: Probability) -> Probability {
    Probability::new_unchecked((q_a.value() + q_b.value()) / 2.0)
}

// Written via the half-difference so that swapping the players negates the
// result exactly.
fn gain(q_self: f64, q_other: f64, p: f64, kappa: f64) -> f64 {
    let r = (q_self + q_other) / 2.0;
    kappa * ((q_self - q_other) / 2.0) * (p - r)
}

/// Mean gain to A over the event outcome, `κ(q_A − r)(p − r)`.
pub fn mean_gain_a(bet: &TwoPersonBet) -> f64 {
    gain(bet.q_a.value(), bet.q_b.value(), bet.p_true.value(), bet.kappa)
}

/// Mean gain to B; exactly the negative of [`mean_gain_a`].
pub fn mean_gain_b(bet: &TwoPersonBet) -> f64 {
    gain(bet.q_b.value(), bet.q_a.value(), bet.p_true.value(), bet.kappa)
}

/// `(κ/4)(σ_B² − σ_A²)`.
pub fn expected_gain_analytic(sigma_a: f64, sigma_b: f64, kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(sigma_a >= 0.0 && sigma_b >= 0.0) {
        return Err(Error::domain("error scales must be nonnegative"));
    }
    Ok(kappa / 4.0 * (sigma_b * sigma_b - sigma_a * sigma_a))
}

/// How the two perception errors are coupled in [`simulate_expected_gain`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dependence {
    Independent,
    /// Gaussian copula with this correlation between the underlying Normals.
    GaussianCopula(f64),
}

/// Monte Carlo average of [`mean_gain_a`] with `q_A = p + ξ_A`, `q_B = p + ξ_B`.
///
/// Refuses parameter sets where a perceived probability would leave `[0, 1]`
/// with probability above [`crate::numerics::noise::MAX_CLAMP_PROBABILITY`];
/// the rare draws that do are clamped.
pub fn simulate_expected_gain(
    p_true: Probability,
    model_a: &ErrorModel,
    model_b: &ErrorModel,
    dependence: Dependence,
    kappa: f64,
    reps: u64,
    stream: &RngStream,
) -> Result<Estimate> {
    check_kappa(kappa)?;
    let p = p_true.value();
    check_clamp_negligible(p, model_a, "player A")?;
    check_clamp_negligible(p, model_b, "player B")?;
    let (a, b) = (*model_a, *model_b);

    match dependence {
        Dependence::Independent => simulate(reps, stream, |rng| {
            let qa = (p + a.sample(rng)).clamp(0.0, 1.0);
            let qb = (p + b.sample(rng)).clamp(0.0, 1.0);
            gain(qa, qb, p, kappa)
        }),
        Dependence::GaussianCopula(rho) => {
            if !(-1.0..=1.0).contains(&rho) {
                return Err(Error::domain(format!("correlation must lie in [-1, 1], got {rho}")));
            }
            let c = (1.0 - rho * rho).sqrt();
            simulate(reps, stream, |rng| {
                let z1: f64 = StandardNormal.sample(rng);
                let z2: f64 = StandardNormal.sample(rng);
                let qa = (p + a.from_standard_normal(z1)).clamp(0.0, 1.0);
                let qb = (p + b.from_standard_normal(rho * z1 + c * z2)).clamp(0.0, 1.0);
                gain(qa, qb, p, kappa)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn midpoint_examples() {
        assert_eq!(mid_price(p(0.2), p(0.3)).value(), 0.25);
        assert_eq!(mid_price(p(0.37), p(0.37)).value(), 0.37);
        assert_eq!(mid_price(p(0.0), p(1.0)).value(), 0.5);
    }

    #[test]
    fn mean_gain_examples() {
        let fair = TwoPersonBet::new(0.3, 0.2, 0.25, 1.0).unwrap();
        assert_eq!(mean_gain_a(&fair), 0.0);
        let bet = TwoPersonBet::new(0.3, 0.2, 0.35, 1.0).unwrap();
        assert!((mean_gain_a(&bet) - 0.005).abs() < 1e-15);
        // A selling: q_A < q_B
        let sell = TwoPersonBet::new(0.2, 0.3, 0.35, 1.0).unwrap();
        assert!((mean_gain_a(&sell) + 0.005).abs() < 1e-15);
    }

    #[test]
    fn analytic_examples() {
        assert_eq!(expected_gain_analytic(0.07, 0.07, 2.0).unwrap(), 0.0);
        assert!((expected_gain_analytic(0.05, 0.10, 1.0).unwrap() - 0.001875).abs() < 1e-15);
        assert!(expected_gain_analytic(0.01, 0.02, 1.0).unwrap() > 0.0);
        assert!(expected_gain_analytic(0.01, 0.02, 0.0).is_err());
        assert!(TwoPersonBet::new(0.1, 0.2, 0.3, -1.0).is_err());
        assert!(TwoPersonBet::new(1.1, 0.2, 0.3, 1.0).is_err());
    }

    #[test]
    fn clamping_gate() {
        let wide = ErrorModel::normal(0.2).unwrap();
        let narrow = ErrorModel::normal(0.01).unwrap();
        let r = simulate_expected_gain(
            p(0.5),
            &wide,
            &narrow,
            Dependence::Independent,
            1.0,
            10,
            &RngStream::new(1, 1),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn monte_carlo_matches_closed_form() {
        let a = ErrorModel::normal(0.05).unwrap();
        let b = ErrorModel::normal(0.10).unwrap();
        let est = simulate_expected_gain(p(0.5), &a, &b, Dependence::Independent, 1.0, 400_000, &RngStream::new(2, 0))
            .unwrap();
        assert!(est.agrees_with(0.001875, 3.0), "{est:?}");
        let same = simulate_expected_gain(p(0.5), &a, &a, Dependence::Independent, 1.0, 400_000, &RngStream::new(2, 1))
            .unwrap();
        assert!(same.agrees_with(0.0, 3.0), "{same:?}");
    }

    #[test]
    fn uniform_and_correlated_errors() {
        let a = ErrorModel::with_rms(crate::NoiseKind::Uniform, 0.04).unwrap();
        let b = ErrorModel::normal(0.08).unwrap();
        let target = expected_gain_analytic(0.04, 0.08, 2.0).unwrap();
        for (i, dep) in [Dependence::Independent, Dependence::GaussianCopula(0.6)].into_iter().enumerate() {
            let est = simulate_expected_gain(p(0.4), &a, &b, dep, 2.0, 400_000, &RngStream::new(3, i as u64)).unwrap();
            assert!(est.agrees_with(target, 3.0), "{dep:?} {est:?} vs {target}");
        }
    }

    #[test]
    fn kappa_scales_linearly() {
        let a = ErrorModel::normal(0.03).unwrap();
        let b = ErrorModel::normal(0.06).unwrap();
        let s = RngStream::new(4, 0);
        let one = simulate_expected_gain(p(0.5), &a, &b, Dependence::Independent, 1.0, 50_000, &s).unwrap();
        let two = simulate_expected_gain(p(0.5), &a, &b, Dependence::Independent, 2.0, 50_000, &s).unwrap();
        assert!((two.mean - 2.0 * one.mean).abs() < 1e-15);
        assert_eq!(
            expected_gain_analytic(0.03, 0.06, 2.0).unwrap(),
            2.0 * expected_gain_analytic(0.03, 0.06, 1.0).unwrap()
        );
    }

    proptest! {
        #[test]
        fn zero_sum(qa in 0.0..=1.0f64, qb in 0.0..=1.0f64, pt in 0.0..=1.0f64, kappa in 0.01..100.0f64) {
            let bet = TwoPersonBet::new(qa, qb, pt, kappa).unwrap();
            prop_assert_eq!(mean_gain_a(&bet), -mean_gain_b(&bet));
        }

        #[test]
        fn midpoint_symmetric(qa in 0.0..=1.0f64, qb in 0.0..=1.0f64) {
            prop_assert_eq!(mid_price(p(qa), p(qb)), mid_price(p(qb), p(qa)));
        }
    }
}
