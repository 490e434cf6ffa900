//! Cross-module properties exercised through the public API only.

use gamble_core::bookmaker::{self, GamblerPopulation};
use gamble_core::duel::{self, Method};
use gamble_core::gentlemans_bet::{self, TwoPersonBet};
use gamble_core::kelly::{self, KellySetting};
use gamble_core::nature::{self, UtilityQuad};
use gamble_core::numerics::mc::simulate;
use gamble_core::skill_game::{self, SkillPerception, ZetaDist};
use gamble_core::{ErrorModel, Error, Probability, QuadratureSpec, RngStream};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_person_bet_is_zero_sum(qa in 0.0..1.0f64, qb in 0.0..1.0f64, p in 0.0..1.0f64, k in 0.1..10.0f64) {
        let bet = TwoPersonBet::new(qa, qb, p, k).unwrap();
        prop_assert_eq!(gentlemans_bet::mean_gain_a(&bet), -gentlemans_bet::mean_gain_b(&bet));
    }

    #[test]
    fn known_p_spread_beats_perturbations(t in -1.0..1.0f64, l in 0.05..0.2f64, e1 in -0.02..0.02f64, e2 in -0.02..0.02f64) {
        let p = 0.5 + t * l;
        let pop = GamblerPopulation::new(0.5, l, 1.0).unwrap();
        let best = bookmaker::optimal_spread_known_p(Probability::new(p).unwrap(), &pop).unwrap();
        let spread = pop.spread();
        let (x1, x2) = (best.x1.value(), best.x2.value());
        let top = bookmaker::mean_gain_with(x1, x2, p, 1.0, &spread);
        let other = bookmaker::mean_gain_with(x1 + e1, x2 + e2, p, 1.0, &spread);
        prop_assert!(other <= top + 1e-15);
    }

    #[test]
    fn kelly_growth_never_exceeds_full_information(d in -0.2..0.2f64, s in 0.0..0.2f64) {
        let g = kelly::expected_growth(&KellySetting::new(d, s).unwrap());
        let full = if d > 0.0 { 2.0 * d * d } else { 0.0 };
        prop_assert!(g <= full + 1e-15);
    }

    #[test]
    fn duel_win_probabilities_complement(ra in 1.1..4.0f64, rb in 1.1..4.0f64, sa in 0.0..0.05f64, sb in 0.0..0.05f64) {
        let quad = Method::Quadrature(QuadratureSpec::default());
        let (na, nb) = (ErrorModel::normal(sa).unwrap(), ErrorModel::normal(sb).unwrap());
        let a = duel::expected_win_prob(ra, rb, &na, &nb, &quad).unwrap().mean;
        let b = duel::expected_win_prob(rb, ra, &nb, &na, &quad).unwrap().mean;
        prop_assert!((a + b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nature_cost_is_nonnegative_and_zero_when_sides_agree(p in 0.0..1.0f64, q in 0.0..1.0f64) {
        let theta = UtilityQuad::new(4.0, 0.0, 1.0, 3.0).unwrap();
        let cost = nature::decision_cost(p, q, &theta);
        prop_assert!(cost >= 0.0);
        if theta.choose(p) == theta.choose(q) {
            prop_assert_eq!(cost, 0.0);
        }
    }
}

#[test]
fn skill_gain_favors_the_more_accurate_player() {
    let spec = QuadratureSpec::default();
    let g = |sa, sb| skill_game::expected_gain(&SkillPerception::new(sa, sb, ZetaDist::NormalStd).unwrap(), &spec).unwrap();
    assert!(g(0.5, 1.0) > 0.0);
    assert!(g(1.0, 0.5) < 0.0);
    assert!(g(0.25, 1.0) > g(0.5, 1.0));
}

#[test]
fn simulations_depend_only_on_seed_and_stream() {
    let draw = |rng: &mut _| -> f64 { rand::Rng::random::<f64>(rng) };
    let a = simulate(100_000, &RngStream::new(7, 3), draw).unwrap();
    let b = simulate(100_000, &RngStream::new(7, 3), draw).unwrap();
    let c = simulate(100_000, &RngStream::new(7, 4), draw).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.mean, c.mean);
    assert!(a.agrees_with(0.5, 4.0));
}

#[test]
fn domain_errors_are_reported() {
    assert!(matches!(Probability::new(1.5), Err(Error::Domain(_))));
    assert!(matches!(KellySetting::new(0.3, 0.1), Err(Error::Domain(_))));
    assert!(matches!(duel::win_prob_known(0.9, 2.0), Err(Error::Domain(_))));
    assert!(matches!(GamblerPopulation::new(0.5, 0.6, 1.0), Err(Error::Domain(_))));
}

#[test]
fn bet_simulation_tracks_closed_form_under_uniform_noise() {
    let rms = 0.05;
    let ma = ErrorModel::with_rms(gamble_core::NoiseKind::Uniform, 0.02).unwrap();
    let mb = ErrorModel::with_rms(gamble_core::NoiseKind::Uniform, rms).unwrap();
    let e = gentlemans_bet::simulate_expected_gain(
        Probability::new(0.4).unwrap(),
        &ma,
        &mb,
        gentlemans_bet::Dependence::Independent,
        2.0,
        400_000,
        &RngStream::new(11, 0),
    )
    .unwrap();
    let exact = gentlemans_bet::expected_gain_analytic(0.02, rms, 2.0).unwrap();
    assert!(e.agrees_with(exact, 4.0), "{e:?} vs {exact}");
}
