//! Even-odds bets on one's own skill under a Bradley-Terry model.
//!
//! A beats B with probability `logistic(x_A − x_B)`. Each player sees the
//! skill gap `u` through noise, `σ ζ`, and bets only when it looks favourable:
//! A when `σ_A ζ_A < u`, B when `σ_B ζ_B > u`. The stake is ±1.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::mc::{simulate, Estimate};
use crate::numerics::noise::{ErrorModel, NoiseKind};
use crate::numerics::quadrature::{integrate_piecewise, QuadratureSpec};
use crate::numerics::rng::RngStream;

/// Standardised (mean 0, variance 1) shape of ζ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ZetaDist {
    #[default]
    NormalStd,
    /// Uniform on `[−√3, √3]`.
    UniformStd,
}

impl ZetaDist {
    fn kind(self) -> NoiseKind {
        match self {
            ZetaDist::NormalStd => NoiseKind::Normal,
            ZetaDist::UniformStd => NoiseKind::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkillPerception {
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub zeta: ZetaDist,
}

impl SkillPerception {
    pub fn new(sigma_a: f64, sigma_b: f64, zeta: ZetaDist) -> Result<Self> {
        for s in [sigma_a, sigma_b] {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::domain(format!("perception scale must be nonnegative, got {s}")));
            }
        }
        Ok(Self { sigma_a, sigma_b, zeta })
    }

    pub fn swapped(&self) -> Self {
        Self {
            sigma_a: self.sigma_b,
            sigma_b: self.sigma_a,
            zeta: self.zeta,
        }
    }

    fn models(&self) -> (ErrorModel, ErrorModel) {
        let k = self.zeta.kind();
        (
            ErrorModel::with_rms(k, self.sigma_a).expect("validated scale"),
            ErrorModel::with_rms(k, self.sigma_b).expect("validated scale"),
        )
    }
}

/// `e^u / (1 + e^u)`.
pub fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// `2·logistic(u) − 1 = tanh(u/2)`, the mean of a ±1 even-odds bet at gap `u`.
fn edge(u: f64) -> f64 {
    (u / 2.0).tanh()
}

/// Mean gain to A given the true skill gap `u = x_A − x_B`.
pub fn gain_at_gap(u: f64, perc: &SkillPerception) -> f64 {
    let (a, b) = perc.models();
    a.cdf(u) * b.sf(u) * edge(u)
}

/// Integrand tails below this are treated as zero.
const TAIL: f64 = 1e-13;

/// Smallest half-window outside which the integrand is below [`TAIL`].
fn tail_cutoff(model: &ErrorModel) -> f64 {
    match model.kind() {
        // sf(7.4) ≈ 6.8e-14
        NoiseKind::Normal => 7.4 * model.scale(),
        NoiseKind::Uniform => model.scale(),
    }
}

/// Rate of gain to A, `∫ gain_at_gap(u) du` over all gaps.
///
/// Pairs `u` with `−u` so the integrand is `tanh(u/2)(F_A(u) − F_B(u))`; this
/// makes swapping the players negate the result exactly.
pub fn expected_gain(perc: &SkillPerception, spec: &QuadratureSpec) -> Result<f64> {
    if perc.sigma_a == 0.0 && perc.sigma_b == 0.0 {
        return Err(Error::domain("at least one perception scale must be positive"));
    }
    let (a, b) = perc.models();
    let w = tail_cutoff(&a).max(tail_cutoff(&b));
    let mut breaks = Vec::new();
    for m in [&a, &b] {
        let s = m.scale();
        if s > 0.0 {
            breaks.extend([0.25 * s, 0.5 * s, s, 2.0 * s, 3.5 * s, 5.0 * s]);
        }
    }
    breaks.retain(|&x| x < w);
    integrate_piecewise(
        |u| {
            // F_A(u)S_B(u) − F_A(−u)S_B(−u) for symmetric ζ
            edge(u) * (a.cdf(u) * b.sf(u) - a.sf(u) * b.cdf(u))
        },
        0.0,
        w,
        &breaks,
        spec,
    )
}

/// [`expected_gain`] with σ_B drawn from a finite mixture of `(weight, σ_B)`
/// pairs, independently of everything else.
pub fn expected_gain_mixture(
    sigma_a: f64,
    sigma_b_mixture: &[(f64, f64)],
    zeta: ZetaDist,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let total: f64 = sigma_b_mixture.iter().map(|(w, _)| w).sum();
    if sigma_b_mixture.is_empty() || sigma_b_mixture.iter().any(|(w, _)| !(*w >= 0.0)) || !(total > 0.0) {
        return Err(Error::domain("mixture weights must be nonnegative with a positive sum"));
    }
    let mut acc = 0.0;
    for &(w, sb) in sigma_b_mixture {
        if w > 0.0 {
            acc += w * expected_gain(&SkillPerception::new(sigma_a, sb, zeta)?, spec)?;
        }
    }
    Ok(acc / total)
}

fn sample_zeta<R: Rng + ?Sized>(zeta: ZetaDist, rng: &mut R) -> f64 {
    match zeta {
        ZetaDist::NormalStd => StandardNormal.sample(rng),
        ZetaDist::UniformStd => 3f64.sqrt() * (2.0 * rng.random::<f64>() - 1.0),
    }
}

/// Monte Carlo rate of gain to A: `u ~ Uniform(−W, W)`, both players draw
/// their perception, a bet happens if both are willing and is settled ±1 by
/// a Bernoulli(logistic(u)) game. Returns `2W ×` the average gain.
pub fn simulate_match_rate(perc: &SkillPerception, window_halfwidth: f64, reps: u64, stream: &RngStream) -> Result<Estimate> {
    let (a, b) = perc.models();
    let need = tail_cutoff(&a).max(tail_cutoff(&b));
    if !(window_halfwidth >= need && window_halfwidth.is_finite()) {
        return Err(Error::domain(format!(
            "window half-width {window_halfwidth} too small: integrand exceeds {TAIL:e} out to {need}"
        )));
    }
    let w = window_halfwidth;
    let (sa, sb, zeta) = (perc.sigma_a, perc.sigma_b, perc.zeta);
    let est = simulate(reps, stream, |rng| {
        let u = w * (2.0 * rng.random::<f64>() - 1.0);
        let za = sa * sample_zeta(zeta, rng);
        let zb = sb * sample_zeta(zeta, rng);
        let a_wins = rng.random::<f64>() < logistic(u);
        let a_willing = za < u || (za == u && rng.random::<bool>());
        let b_willing = zb > u || (zb == u && rng.random::<bool>());
        if a_willing && b_willing {
            if a_wins {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    })?;
    Ok(Estimate {
        mean: 2.0 * w * est.mean,
        std_error: 2.0 * w * est.std_error,
        reps: est.reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perc(a: f64, b: f64) -> SkillPerception {
        SkillPerception::new(a, b, ZetaDist::NormalStd).unwrap()
    }

    #[test]
    fn logistic_examples() {
        assert_eq!(logistic(0.0), 0.5);
        assert!((logistic(3f64.ln()) - 0.75).abs() < 1e-15);
        assert!(logistic(-800.0) >= 0.0 && logistic(800.0) <= 1.0);
        assert!((edge(1.0) - (2.0 * logistic(1.0) - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn gain_at_gap_examples() {
        assert_eq!(gain_at_gap(0.0, &perc(1.0, 1.0)), 0.0);
        let g = gain_at_gap(1.0, &perc(1.0, 1.0));
        assert!((g - 0.061_685_137_713_192_55).abs() < 1e-12, "{g}");
        // σ = 0 steps
        assert_eq!(gain_at_gap(0.5, &perc(0.0, 0.0)), 0.0);
        let p0 = perc(0.0, 1.0);
        assert_eq!(gain_at_gap(-0.3, &p0), 0.0);
        assert!(gain_at_gap(0.3, &p0) > 0.0);
    }

    #[test]
    fn expected_gain_values() {
        let spec = QuadratureSpec::default();
        assert_eq!(expected_gain(&perc(0.7, 0.7), &spec).unwrap(), 0.0);
        let cases = [
            ((0.5, 1.0), 0.082_566_4),
            ((1.0, 0.5), -0.082_566_4),
            ((0.25, 2.0), 0.366_814_5),
            ((0.0, 1.0), 0.112_912_0),
        ];
        for ((a, b), want) in cases {
            let g = expected_gain(&perc(a, b), &spec).unwrap();
            assert!((g - want).abs() < 1e-6, "({a},{b}) {g}");
        }
        assert!(expected_gain(&perc(0.0, 0.0), &spec).is_err());
    }

    #[test]
    fn decreasing_in_own_error() {
        let spec = QuadratureSpec::default();
        let vals: Vec<f64> = (0..=10)
            .map(|i| expected_gain(&perc(0.1 * i as f64, 0.6), &spec).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    }

    #[test]
    fn error_squared_onset() {
        let spec = QuadratureSpec::new(1e-13, 1e-12, 4000).unwrap();
        let base = expected_gain(&perc(0.0, 1.0), &spec).unwrap();
        let d1 = base - expected_gain(&perc(0.02, 1.0), &spec).unwrap();
        let d2 = base - expected_gain(&perc(0.04, 1.0), &spec).unwrap();
        let ratio = d2 / d1;
        assert!((ratio / 4.0 - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn mixture_averages() {
        let spec = QuadratureSpec::default();
        let m = expected_gain_mixture(0.5, &[(1.0, 0.5), (1.0, 1.0)], ZetaDist::NormalStd, &spec).unwrap();
        let direct = 0.5 * expected_gain(&perc(0.5, 1.0), &spec).unwrap();
        assert!((m - direct).abs() < 1e-12);
        assert!(expected_gain_mixture(0.5, &[], ZetaDist::NormalStd, &spec).is_err());
    }

    #[test]
    fn uniform_zeta_runs() {
        let spec = QuadratureSpec::default();
        let p = SkillPerception::new(0.5, 1.0, ZetaDist::UniformStd).unwrap();
        let g = expected_gain(&p, &spec).unwrap();
        assert!(g > 0.0);
        assert_eq!(g, -expected_gain(&p.swapped(), &spec).unwrap());
    }

    #[test]
    fn simulation_matches_quadrature() {
        let p = perc(0.5, 1.0);
        let target = expected_gain(&p, &QuadratureSpec::default()).unwrap();
        let est = simulate_match_rate(&p, 10.0, 1_000_000, &RngStream::new(31, 0)).unwrap();
        assert!(est.agrees_with(target, 3.0), "{est:?} vs {target}");
        assert!(simulate_match_rate(&p, 3.0, 10, &RngStream::new(31, 0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn antisymmetric(a in 0.0..2.0f64, b in 0.01..2.0f64) {
            let spec = QuadratureSpec::default();
            let p = perc(a, b);
            prop_assert_eq!(expected_gain(&p, &spec).unwrap(), -expected_gain(&p.swapped(), &spec).unwrap());
        }

        #[test]
        fn logistic_complement(u in -50.0..50.0f64) {
            prop_assert!((logistic(u) + logistic(-u) - 1.0).abs() < 1e-15);
        }
    }
}
