//! A two-action decision against nature: pick venue A or B before knowing
//! whether it rains.
//!
//! With `p` the probability of rain, action A pays `a` (dry) or `b` (rain)
//! and B pays `c` or `d`. A is better below `p_crit`, B above. Acting on a
//! perceived `p_perc` only costs something when it lands on the wrong side
//! of `p_crit`, and then the loss is `|p_true − p_crit|·z` with
//! `z = a − b − c + d`.

use crate::error::{Error, Result};
use crate::numerics::mc::{simulate, Estimate};
use crate::numerics::noise::{check_clamp_negligible, ErrorModel, Probability};
use crate::numerics::quadrature::{integrate_piecewise, QuadratureSpec};
use crate::numerics::rng::RngStream;

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityQuad {
    /// A when dry.
    pub a: f64,
    /// A when it rains.
    pub b: f64,
    /// B when dry.
    pub c: f64,
    /// B when it rains.
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    A,
    B,
}

impl UtilityQuad {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::domain("utilities must be finite"));
        }
        if !(a > c && d > b) {
            return Err(Error::domain(format!(
                "need a > c and d > b (each venue best in its weather), got a={a} b={b} c={c} d={d}"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// `a − b − c + d`.
    pub fn z(&self) -> f64 {
        self.a - self.b - self.c + self.d
    }

    /// `(a−c) / ((a−c) + (d−b))`.
    pub fn p_crit(&self) -> Probability {
        let up = self.a - self.c;
        Probability::new_unchecked(up / (up + (self.d - self.b)))
    }

    pub fn expected_utility(&self, action: Action, p_rain: f64) -> f64 {
        match action {
            Action::A => (1.0 - p_rain) * self.a + p_rain * self.b,
            Action::B => (1.0 - p_rain) * self.c + p_rain * self.d,
        }
    }

    /// A below `p_crit`, B above; ties go to A.
    pub fn choose(&self, p_perc: f64) -> Action {
        if p_perc <= self.p_crit().value() {
            Action::A
        } else {
            Action::B
        }
    }
}

/// Expected utility forgone by acting on `p_perc` when the truth is
/// `p_true`: the best action's expected utility minus the chosen one's.
pub fn decision_cost(p_true: f64, p_perc: f64, theta: &UtilityQuad) -> f64 {
    let ua = theta.expected_utility(Action::A, p_true);
    let ub = theta.expected_utility(Action::B, p_true);
    let chosen = match theta.choose(p_perc) {
        Action::A => ua,
        Action::B => ub,
    };
    ua.max(ub) - chosen
}

/// Where the true probability comes from in [`expected_cost`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PTrue {
    Fixed(f64),
    Uniform(f64, f64),
}

impl PTrue {
    fn validate(&self, noise: &ErrorModel) -> Result<()> {
        match *self {
            PTrue::Fixed(p) => {
                Probability::new(p)?;
                check_clamp_negligible(p, noise, "nature")
            }
            PTrue::Uniform(lo, hi) => {
                Probability::new(lo)?;
                Probability::new(hi)?;
                if !(lo < hi) {
                    return Err(Error::domain(format!("empty range [{lo}, {hi}]")));
                }
                check_clamp_negligible(lo, noise, "nature")?;
                check_clamp_negligible(hi, noise, "nature")
            }
        }
    }
}

/// Monte Carlo mean of [`decision_cost`] with `p_perc = p_true + ξ`.
pub fn expected_cost(
    p_true: PTrue,
    noise: &ErrorModel,
    theta: &UtilityQuad,
    reps: u64,
    stream: &RngStream,
) -> Result<Estimate> {
    p_true.validate(noise)?;
    simulate(reps, stream, |rng| {
        let p = match p_true {
            PTrue::Fixed(p) => p,
            PTrue::Uniform(lo, hi) => lo + (hi - lo) * rng.random::<f64>(),
        };
        decision_cost(p, p + noise.sample(rng), theta)
    })
}

fn cost_at(p: f64, noise: &ErrorModel, theta: &UtilityQuad) -> f64 {
    let pc = theta.p_crit().value();
    let d = p - pc;
    if d < 0.0 {
        theta.z() * -d * noise.sf(-d)
    } else if d > 0.0 {
        theta.z() * d * noise.cdf(-d)
    } else {
        0.0
    }
}

/// Exact expectation of [`decision_cost`]: `z·d·P(ξ crosses d)` at fixed
/// `p_true` with `d = |p_true − p_crit|`, averaged by quadrature for a
/// uniform `p_true`.
pub fn expected_cost_analytic(
    p_true: PTrue,
    noise: &ErrorModel,
    theta: &UtilityQuad,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match p_true {
        PTrue::Fixed(p) => {
            Probability::new(p)?;
            Ok(cost_at(p, noise, theta))
        }
        PTrue::Uniform(lo, hi) => {
            if !(lo < hi) {
                return Err(Error::domain(format!("empty range [{lo}, {hi}]")));
            }
            let pc = theta.p_crit().value();
            let s = noise.scale();
            let breaks = [pc - 8.0 * s, pc - s, pc, pc + s, pc + 8.0 * s];
            let v = integrate_piecewise(|p| cost_at(p, noise, theta), lo, hi, &breaks, spec)?;
            Ok(v / (hi - lo))
        }
    }
}
