//! A bookmaker quoting a bid `x1` and ask `x2` to a population of gamblers.
//!
//! Gamblers' perceived probabilities are spread over `[p_gamb − L, p_gamb + L]`.
//! A gambler who perceives `q > x2` buys `κ(q − x2)` contracts at `x2`; one
//! who perceives `q < x1` sells `κ(x1 − q)` at `x1`. Each contract earns the
//! bookmaker `x2 − p_true` or `p_true − x1` in expectation. All gains here are
//! for the bookmaker.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::mc::{simulate, Estimate};
use crate::numerics::noise::{ErrorModel, NoiseKind, Probability};
use crate::numerics::optimize::{nelder_mead_max, NelderMeadOptions};
use crate::numerics::quadrature::QuadratureSpec;
use crate::numerics::rng::RngStream;

/// Distribution of gamblers' perceived probabilities.
///
/// Only [`UniformSpread`] ships; other shapes plug into [`mean_gain_with`].
pub trait GamblerSpread {
    /// `E[(X − x)₊]`, the mean number of contracts bought per unit affluence at ask `x`.
    fn upper_partial(&self, x: f64) -> f64;
    /// `E[(x − X)₊]`, the mean number sold at bid `x`.
    fn lower_partial(&self, x: f64) -> f64;
    fn sample(&self, rng: &mut dyn rand::RngCore) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformSpread {
    pub lo: f64,
    pub hi: f64,
}

impl GamblerSpread for UniformSpread {
    fn upper_partial(&self, x: f64) -> f64 {
        let a = x.max(self.lo);
        if a >= self.hi {
            return 0.0;
        }
        ((self.hi - x).powi(2) - (a - x).powi(2)) / (2.0 * (self.hi - self.lo))
    }

    fn lower_partial(&self, x: f64) -> f64 {
        let b = x.min(self.hi);
        if b <= self.lo {
            return 0.0;
        }
        ((x - self.lo).powi(2) - (x - b).powi(2)) / (2.0 * (self.hi - self.lo))
    }

    fn sample(&self, rng: &mut dyn rand::RngCore) -> f64 {
        self.lo + (self.hi - self.lo) * rng.random::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GamblerPopulation {
    pub p_gamb: Probability,
    /// Half-width of the perceived-probability spread.
    pub l: f64,
    /// Aggregate affluence.
    pub kappa: f64,
}

impl GamblerPopulation {
    pub fn new(p_gamb: f64, l: f64, kappa: f64) -> Result<Self> {
        let p_gamb = Probability::new(p_gamb)?;
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::domain(format!("spread half-width L must be positive, got {l}")));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::domain(format!("affluence kappa must be positive, got {kappa}")));
        }
        let (lo, hi) = (p_gamb.value() - l, p_gamb.value() + l);
        if lo < 0.0 || hi > 1.0 {
            return Err(Error::domain(format!(
                "gambler range [{lo}, {hi}] must lie inside [0, 1]"
            )));
        }
        Ok(Self { p_gamb, l, kappa })
    }

    pub fn spread(&self) -> UniformSpread {
        UniformSpread {
            lo: self.p_gamb.value() - self.l,
            hi: self.p_gamb.value() + self.l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadInterval {
    pub x1: Probability,
    pub x2: Probability,
}

impl SpreadInterval {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        let (x1, x2) = (Probability::new(x1)?, Probability::new(x2)?);
        if x1 > x2 {
            return Err(Error::domain(format!("bid {x1} exceeds ask {x2}")));
        }
        Ok(Self { x1, x2 })
    }

    pub fn width(&self) -> f64 {
        self.x2.value() - self.x1.value()
    }
}

/// The bookmaker's own estimate `p_book = p_true + ξ`, with `sigma` the rms of ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BookmakerBelief {
    pub p_book: Probability,
    pub sigma: f64,
}

impl BookmakerBelief {
    pub fn new(p_book: f64, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be nonnegative, got {sigma}")));
        }
        Ok(Self {
            p_book: Probability::new(p_book)?,
            sigma,
        })
    }

    /// `[p_book − y*, p_book + y*]`.
    pub fn interval(&self, pop: &GamblerPopulation) -> Result<SpreadInterval> {
        let y = y_star(self.sigma, pop.l)?;
        SpreadInterval::new(self.p_book.value() - y, self.p_book.value() + y)
    }
}

fn gain_raw<S: GamblerSpread + ?Sized>(x1: f64, x2: f64, p: f64, kappa: f64, spread: &S) -> f64 {
    kappa * ((x2 - p) * spread.upper_partial(x2) + (p - x1) * spread.lower_partial(x1))
}

/// Mean gain for an arbitrary gambler distribution; `x1`, `x2` need not be
/// probabilities.
pub fn mean_gain_with<S: GamblerSpread + ?Sized>(x1: f64, x2: f64, p_true: f64, kappa: f64, spread: &S) -> f64 {
    gain_raw(x1, x2, p_true, kappa, spread)
}

/// Mean gain with integration limits clipped to the gambler range, so the
/// interval need not lie inside it.
pub fn mean_gain(spread: &SpreadInterval, p_true: Probability, pop: &GamblerPopulation) -> f64 {
    gain_raw(spread.x1.value(), spread.x2.value(), p_true.value(), pop.kappa, &pop.spread())
}

/// `[⅔p + ⅓(p_gamb − L), ⅔p + ⅓(p_gamb + L)]`.
pub fn optimal_spread_known_p(p_true: Probability, pop: &GamblerPopulation) -> Result<SpreadInterval> {
    let s = pop.spread();
    let p = p_true.value();
    if p < s.lo || p > s.hi {
        return Err(Error::domain(format!(
            "p_true {p} lies outside the gambler range [{}, {}]",
            s.lo, s.hi
        )));
    }
    SpreadInterval::new(2.0 / 3.0 * p + s.lo / 3.0, 2.0 / 3.0 * p + s.hi / 3.0)
}

/// `(2κ/27)(L² + 3Δ²)` with `Δ = p_gamb − p_true`.
pub fn gain_known_p(delta: f64, l: f64, kappa: f64) -> Result<f64> {
    if !(l > 0.0 && kappa > 0.0) {
        return Err(Error::domain("L and kappa must be positive"));
    }
    if delta.abs() > l {
        return Err(Error::domain(format!("|delta| = {} exceeds L = {l}", delta.abs())));
    }
    Ok(known_gain(delta, l, kappa))
}

fn known_gain(delta: f64, l: f64, kappa: f64) -> f64 {
    2.0 * kappa / 27.0 * (l * l + 3.0 * delta * delta)
}

/// Best interval symmetric about `p_gamb` when `p_true = p_gamb`:
/// `(L/3, 2κL²/27)`.
pub fn optimal_symmetric(pop: &GamblerPopulation) -> (f64, f64) {
    (pop.l / 3.0, known_gain(0.0, pop.l, pop.kappa))
}

/// Optimal half-width `(L/3)(2 − √(1 − 9σ²/L²))` around `p_book`.
///
/// This is the local maximum of `y(L−y)² + (3y−2L)σ²`; once `σ²/L² > 1/12`
/// the endpoint `y = L` scores higher. Past `σ = L/3` there is no interior
/// stationary point and `L` is returned.
pub fn y_star(sigma: f64, l: f64) -> Result<f64> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("sigma must be nonnegative, got {sigma}")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::domain(format!("L must be positive, got {l}")));
    }
    let v = 9.0 * sigma * sigma / (l * l);
    // σ = L/3 itself can round to just above 1.
    if v > 1.0 + 1e-12 {
        return Ok(l);
    }
    Ok(l / 3.0 * (2.0 - (1.0 - v).max(0.0).sqrt()))
}

/// The second-order objective `y(L−y)² + (3y−2L)σ²` maximised by [`y_star`].
pub fn noisy_objective(y: f64, sigma: f64, l: f64) -> f64 {
    y * (l - y).powi(2) + (3.0 * y - 2.0 * l) * sigma * sigma
}

fn check_u(u: f64) -> Result<()> {
    if !(0.0..=1.0 / 9.0).contains(&u) {
        return Err(Error::domain(format!(
            "u = sigma²/L² = {u} is outside [0, 1/9]; use simulate_bookmaker beyond sigma = L/3"
        )));
    }
    Ok(())
}

/// `(1 + (1 − 9u)^{3/2}) / 27` for `u ∈ [0, 1/9]`.
pub fn h(u: f64) -> Result<f64> {
    check_u(u)?;
    Ok((1.0 + (1.0 - 9.0 * u).powf(1.5)) / 27.0)
}

/// `κ h(σ²/L²) L²`: the bookmaker's expected gain using `[p_book ± y*]` when
/// `p_gamb = p_true`.
pub fn expected_gain_noisy_book(sigma: f64, pop: &GamblerPopulation) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::domain(format!("sigma must be nonnegative, got {sigma}")));
    }
    let l = pop.l;
    Ok(pop.kappa * h(sigma * sigma / (l * l))? * l * l)
}

/// Expected gain per `κL²` for an interval `[ξ + c − y, ξ + c + y]` around
/// `p_true = 0`, gamblers on `[r − 1, r + 1]`, averaged over ξ.
fn expected_unit_gain(noise: &ErrorModel, r: f64, c: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    let spread = UniformSpread { lo: r - 1.0, hi: r + 1.0 };
    let kinks = [
        spread.lo - c - y,
        spread.lo - c + y,
        spread.hi - c - y,
        spread.hi - c + y,
    ];
    noise.expect(
        |xi| gain_raw(xi + c - y, xi + c + y, 0.0, 1.0, &spread),
        &kinks,
        spec,
    )
}

/// `h*(u, r)`: expected gain per `κL²` when the bookmaker uses `[p_book ± y*]`
/// but the gamblers' consensus is off by `Δ = rL`. Exact expectation over ξ of
/// the clipped mean gain, with ξ of the given shape and variance `uL²`.
pub fn h_star(u: f64, r: f64, kind: NoiseKind) -> Result<f64> {
    h_star_with(u, r, kind, &QuadratureSpec::default())
}

pub fn h_star_with(u: f64, r: f64, kind: NoiseKind, spec: &QuadratureSpec) -> Result<f64> {
    check_u(u)?;
    if !r.is_finite() {
        return Err(Error::domain("r must be finite"));
    }
    let sigma = u.sqrt();
    let noise = ErrorModel::with_rms(kind, sigma)?;
    expected_unit_gain(&noise, r, 0.0, y_star(sigma, 1.0)?, spec)
}

/// The same quantity expanded to second order in ξ, valid while the interval
/// stays inside the gambler range:
/// `¼[y(A² + B²) + (2y − 2A − 2B)u]` with `A = 1 + r − y`, `B = 1 − r − y`.
pub fn h_star_second_order(u: f64, r: f64) -> Result<f64> {
    check_u(u)?;
    let y = y_star(u.sqrt(), 1.0)?;
    let a = 1.0 + r - y;
    let b = 1.0 - r - y;
    Ok(0.25 * (y * (a * a + b * b) + (2.0 * y - 2.0 * a - 2.0 * b) * u))
}

/// Interval `[p_book + offset ± half_width]` (in units of `L`) maximising the
/// expected gain for a given bookmaker error and gambler bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyOptimum {
    pub offset: f64,
    pub half_width: f64,
    /// Per `κL²`.
    pub gain: f64,
}

/// Numerical optimum over both offset and half-width; no closed form is known.
pub fn optimal_noisy_interval(u: f64, r: f64, kind: NoiseKind) -> Result<NoisyOptimum> {
    if !(u >= 0.0 && u.is_finite() && r.is_finite()) {
        return Err(Error::domain(format!("need u >= 0 and finite r, got u={u}, r={r}")));
    }
    let sigma = u.sqrt();
    let noise = ErrorModel::with_rms(kind, sigma)?;
    let spec = QuadratureSpec::default();
    let mut failure = None;
    let start = [r / 3.0, y_star(sigma, 1.0)?.min(0.9)];
    let opts = NelderMeadOptions {
        step: 0.05,
        x_tol: 1e-9,
        max_iter: 5_000,
    };
    let (x, gain) = nelder_mead_max(
        |v| {
            if v[1] < 0.0 {
                return f64::NEG_INFINITY;
            }
            match expected_unit_gain(&noise, r, v[0], v[1], &spec) {
                Ok(g) => g,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            }
        },
        &start,
        &opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(NoisyOptimum {
        offset: x[0],
        half_width: x[1],
        gain,
    })
}

/// How the bookmaker sets the interval in [`simulate_bookmaker`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    /// [`optimal_spread_known_p`].
    KnownP,
    /// `[p_gamb ± L/3]`.
    SymmetricConsensus,
    /// `[p_book ± y*]` with `p_book = p_true + ξ` drawn afresh each replication.
    NoisyYStar(ErrorModel),
}

/// Monte Carlo estimate of the bookmaker's mean gain. Each replication draws
/// one gambler uniformly from the population and settles in expectation, so
/// the estimator averages `κ[(x2 − p)(X − x2)₊ + (p − x1)(x1 − X)₊]`.
pub fn simulate_bookmaker(
    p_true: Probability,
    pop: &GamblerPopulation,
    policy: &Policy,
    reps: u64,
    stream: &RngStream,
) -> Result<Estimate> {
    let p = p_true.value();
    let spread = pop.spread();
    let kappa = pop.kappa;
    let settle = move |x1: f64, x2: f64, x: f64| kappa * ((x2 - p) * (x - x2).max(0.0) + (p - x1) * (x1 - x).max(0.0));

    match *policy {
        Policy::KnownP | Policy::SymmetricConsensus => {
            let iv = if *policy == Policy::KnownP {
                optimal_spread_known_p(p_true, pop)?
            } else {
                let (w, _) = optimal_symmetric(pop);
                SpreadInterval::new(pop.p_gamb.value() - w, pop.p_gamb.value() + w)?
            };
            let (x1, x2) = (iv.x1.value(), iv.x2.value());
            simulate(reps, stream, |rng| settle(x1, x2, spread.sample(rng)))
        }
        Policy::NoisyYStar(noise) => {
            let y = y_star(noise.rms(), pop.l)?;
            simulate(reps, stream, |rng| {
                let p_book = p + noise.sample(rng);
                settle(p_book - y, p_book + y, spread.sample(rng))
            })
        }
    }
}
