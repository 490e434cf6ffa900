//! Items whose true utilities form a Poisson process with intensity `e^(−x)`,
//! each perceived as `x + ξ` with `ξ ~ Normal(0, σ²)`.
//!
//! Choosing the item that looks best costs `X_(1) − X_chosen`. Read as an
//! auction, each point is a bidder who bids their perceived value; the winner
//! either pays their own bid (sealed) or the runner-up's (Vickrey).

use std::cell::RefCell;

use rand::{Rng, RngCore, SeedableRng};
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::numerics::mc::{simulate, simulate_many, Estimate};
use crate::numerics::quadrature::{integrate, integrate_piecewise, QuadratureSpec};
use crate::numerics::rng::{RngStream, StreamRng};
use crate::numerics::special::{gumbel_pdf, normal_cdf, std_normal_cdf, std_normal_sf};

/// Largest σ the sampler accepts. The number of points it must generate per
/// replication grows like `e^c` with `c − c²/(2σ²) = ln ε`; at σ = 1.5 that
/// is already ~3·10⁵.
pub const MAX_SIGMA: f64 = 1.5;

/// Default bound on the expected number of ungenerated points that could
/// still change the top two perceived values.
pub const DEFAULT_TAIL_EPS: f64 = 1e-10;

/// How often (in points) the sampler re-evaluates its stopping bound.
const CHECK_EVERY: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerceivedItem {
    pub x_true: f64,
    pub y_perc: f64,
}

/// One auction outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuctionResult {
    pub winner_x: f64,
    pub winner_bid: f64,
    pub second_bid: f64,
    pub profit_sealed: f64,
    pub profit_vickrey: f64,
}

/// `E[X_(1) − X_(2)] = 1`.
pub fn mean_top_gap() -> f64 {
    1.0
}

/// `∫ P(N(x) = 1) dx = ∫ e^(−x) exp(−e^(−x)) dx`, which should be 1.
pub fn mean_top_gap_quadrature(spec: &QuadratureSpec) -> Result<f64> {
    integrate(gumbel_pdf, f64::NEG_INFINITY, f64::INFINITY, spec)
}

/// Monte Carlo mean of `X_(1) − X_(2)`.
pub fn simulate_top_gap(reps: u64, stream: &RngStream) -> Result<Estimate> {
    simulate(reps, stream, |rng| {
        let g1: f64 = Exp1.sample(rng);
        let e2: f64 = Exp1.sample(rng);
        let g2 = g1 + e2;
        g2.ln() - g1.ln()
    })
}

/// Expected number of points with true utility below `x` whose perceived
/// utility exceeds `y`, bounded above by dropping a nonnegative term:
/// `∫_{−∞}^x e^(−u) Φ̄((y−u)/σ) du ≤ e^(σ²/2 − y) Φ̄((y−x)/σ − σ)`.
fn tail_count_bound(x: f64, y: f64, sigma: f64) -> f64 {
    (sigma * sigma / 2.0 - y).exp() * std_normal_sf((y - x) / sigma - sigma)
}

/// The top of a perceived process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopTwo {
    /// Largest true utility `X_(1)`.
    pub best_true: f64,
    /// The item with the largest perceived utility.
    pub winner: PerceivedItem,
    /// Second-largest perceived utility.
    pub second_perc: f64,
    /// Points generated.
    pub points: usize,
}

/// Generates true points in decreasing order, adds noise, and stops once
/// [`tail_count_bound`] at the current point and second-best perceived value
/// drops below `eps`.
pub fn sample_top_two<R: Rng + ?Sized>(rng: &mut R, sigma: f64, eps: f64) -> TopTwo {
    let mut gamma = 0.0;
    let mut next_x = |rng: &mut R| {
        let e: f64 = Exp1.sample(rng);
        gamma += e;
        -f64::ln(gamma)
    };
    let x1 = next_x(rng);
    let x2 = next_x(rng);
    if sigma == 0.0 {
        return TopTwo {
            best_true: x1,
            winner: PerceivedItem { x_true: x1, y_perc: x1 },
            second_perc: x2,
            points: 2,
        };
    }
    let noisy = |x: f64, rng: &mut R| {
        let z: f64 = StandardNormal.sample(rng);
        PerceivedItem { x_true: x, y_perc: x + sigma * z }
    };
    let a = noisy(x1, rng);
    let b = noisy(x2, rng);
    let (mut winner, mut second) = if a.y_perc >= b.y_perc { (a, b.y_perc) } else { (b, a.y_perc) };
    let mut points = 2;
    let mut x = x2;
    loop {
        if points % CHECK_EVERY == 0 && tail_count_bound(x, second, sigma) < eps {
            break;
        }
        x = next_x(rng);
        let item = noisy(x, rng);
        points += 1;
        if item.y_perc > winner.y_perc {
            second = winner.y_perc;
            winner = item;
        } else if item.y_perc > second {
            second = item.y_perc;
        }
    }
    TopTwo {
        best_true: x1,
        winner,
        second_perc: second,
        points,
    }
}

// Each replication runs on its own generator seeded from the block stream,
// so the variable number of draws in one replication leaves the others
// untouched and runs with different stopping bounds stay coupled.
fn replication_rng(block: &mut StreamRng) -> StreamRng {
    StreamRng::seed_from_u64(block.next_u64())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(0.0..=MAX_SIGMA).contains(&sigma) {
        return Err(Error::domain(format!(
            "sigma must lie in [0, {MAX_SIGMA}] for the sampler, got {sigma}"
        )));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("tail bound must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

/// Mean of `X_(1) − X_chosen`.
pub fn simulate_choice_cost(sigma: f64, reps: u64, stream: &RngStream) -> Result<Estimate> {
    simulate_choice_cost_eps(sigma, DEFAULT_TAIL_EPS, reps, stream)
}

pub fn simulate_choice_cost_eps(sigma: f64, eps: f64, reps: u64, stream: &RngStream) -> Result<Estimate> {
    check_sigma(sigma)?;
    check_eps(eps)?;
    simulate(reps, stream, |rng| {
        let t = sample_top_two(&mut replication_rng(rng), sigma, eps);
        t.best_true - t.winner.x_true
    })
}

/// One auction from the top of the perceived process.
pub fn auction_result(top: &TopTwo) -> AuctionResult {
    let w = top.winner;
    assert!(w.y_perc >= top.second_perc, "winner must hold the highest bid");
    AuctionResult {
        winner_x: w.x_true,
        winner_bid: w.y_perc,
        second_bid: top.second_perc,
        profit_sealed: w.x_true - w.y_perc,
        profit_vickrey: w.x_true - top.second_perc,
    }
}

/// Mean winner's profit under both protocols, and of their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuctionEstimate {
    pub sealed: Estimate,
    pub vickrey: Estimate,
    /// Vickrey minus sealed, estimated pathwise.
    pub gap: Estimate,
}

pub fn simulate_auction(sigma: f64, reps: u64, stream: &RngStream) -> Result<AuctionEstimate> {
    simulate_auction_eps(sigma, DEFAULT_TAIL_EPS, reps, stream)
}

pub fn simulate_auction_eps(sigma: f64, eps: f64, reps: u64, stream: &RngStream) -> Result<AuctionEstimate> {
    check_sigma(sigma)?;
    check_eps(eps)?;
    let [sealed, vickrey, gap] = simulate_many(reps, stream, |rng| {
        let r = auction_result(&sample_top_two(&mut replication_rng(rng), sigma, eps));
        [r.profit_sealed, r.profit_vickrey, r.profit_vickrey - r.profit_sealed]
    })?;
    Ok(AuctionEstimate { sealed, vickrey, gap })
}

/// `∫_{−∞}^z e^(−u) Φ̄_σ(y − u) du`, the mean number of points below `z`
/// perceived above `y`.
fn lambda_below(z: f64, y: f64, sigma: f64) -> f64 {
    let a = (y - z) / sigma;
    let v = (sigma * sigma / 2.0 - y).exp() * std_normal_sf(a - sigma) - (-z).exp() * std_normal_sf(a);
    v.max(0.0)
}

/// `∫_{−∞}^x e^(−u) φ_σ(y − u) du`.
fn density_below(x: f64, y: f64, sigma: f64) -> f64 {
    (sigma * sigma / 2.0 - y).exp() * std_normal_sf((y - x) / sigma - sigma)
}

/// Mean choice cost by nested quadrature:
///
/// `E[cost] = ∫ g(x₁) ∫_{−∞}^{x₁} ∫ Φ_σ(y − x₁) P(M_(x,x₁) < y) P(M_(−∞,x] ∈ dy) dx dx₁`
///
/// where `M_I` is the largest perceived utility among items with true
/// utility in `I`. The two `M` factors combine to `exp(−Λ(x₁, y))` times the
/// density `∫_{−∞}^x e^(−u) φ_σ(y − u) du`.
pub fn choice_cost_integral(sigma: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let s = sigma;
    let mid_spec = spec.scaled(0.1);
    let inner_spec = spec.scaled(0.01);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let record = |r: Result<f64>| -> f64 {
        r.unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            0.0
        })
    };
    // Below x₁ − depth the chosen item essentially never lies: it would need
    // ξ of order depth/σ standard deviations against e^depth competitors.
    let depth = s * s + s * (s * s + 60.0).sqrt() + 0.5;

    let inner = |x1: f64, x: f64| -> f64 {
        let f = |y: f64| {
            normal_cdf(y - x1, s).unwrap_or(0.0) * (-lambda_below(x1, y, s)).exp() * density_below(x, y, s)
        };
        let lo = x1 - 10.0 * s - 4.0;
        let hi = x1.max(x + s * s) + 10.0 * s + 30.0;
        let breaks = [x1 - 3.0 * s, x1, x + s * s, x1 + 3.0 * s, x1 + 5.0];
        record(integrate_piecewise(f, lo, hi, &breaks, &inner_spec))
    };
    let middle = |x1: f64| -> f64 {
        let f = |x: f64| inner(x1, x);
        let breaks = [x1 - depth / 2.0, x1 - depth / 4.0, x1 - s];
        record(integrate_piecewise(f, x1 - depth, x1, &breaks, &mid_spec))
    };
    let outer = integrate_piecewise(
        |x1| gumbel_pdf(x1) * middle(x1),
        -3.6,
        26.0,
        &[-1.0, 0.0, 1.0, 3.0, 6.0, 12.0],
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    outer
}

/// One-dimensional form of the same expectation, kept as an independent check.
/// Integrating out `x₁` and `x` in closed form leaves
/// `∫ Φ(v/σ) e^(σ²/2 − v) σ ψ(v/σ − σ) / (1 + Λ₀(v))² dv`
/// with `ψ(a) = φ(a) − aΦ̄(a)` and `Λ₀(v) = e^(σ²/2 − v) Φ̄(v/σ − σ) − Φ̄(v/σ)`.
pub fn choice_cost_reduced(sigma: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let s = sigma;
    let psi = |a: f64| crate::numerics::special::std_normal_pdf(a) - a * std_normal_sf(a);
    let f = |v: f64| {
        let e = (s * s / 2.0 - v).exp();
        let lam0 = e * std_normal_sf(v / s - s) - std_normal_sf(v / s);
        std_normal_cdf(v / s) * e * s * psi(v / s - s) / (1.0 + lam0).powi(2)
    };
    let breaks = [-10.0 * s, -3.0 * s, 0.0, s * s, 3.0 * s, 10.0 * s];
    integrate_piecewise(f, -12.0 * s - 1.0, 12.0 * s + 40.0, &breaks, spec)
}
