//! Models of betting and decision making when probabilities are only
//! roughly known.
//!
//! Every model follows the same recipe: an agent acts as if its perceived
//! probability `p_perc = p_true + ξ` were the truth, and we compute the mean
//! outcome under the true probability. Closed forms are implemented next to
//! seeded Monte Carlo estimators that reproduce them.
//!
//! * [`numerics`]: special functions, adaptive quadrature, random streams,
//!   perception noise and the Poisson process sampler.
//! * [`gentlemans_bet`]: two people betting at the midpoint of their beliefs.
//! * [`bookmaker`]: spread-interval economics for a monopoly bookmaker.
//! * [`skill_game`]: even-odds bets between players unsure of their skill.
//! * [`kelly`]: first-order Kelly growth with a noisy edge.
//! * [`duel`]: the pistols model.
//! * [`extreme_value`]: choosing the best item and the two auction protocols.
//! * [`tournament`]: Brier scoring and prediction tournaments.
//! * [`nature`]: the two-action decision against nature.

pub mod bookmaker;
pub mod duel;
pub mod error;
pub mod extreme_value;
pub mod gentlemans_bet;
pub mod kelly;
pub mod nature;
pub mod numerics;
pub mod skill_game;
pub mod tournament;

pub use error::{Error, Result};
pub use numerics::mc::Estimate;
pub use numerics::noise::{ErrorModel, NoiseKind, Probability};
pub use numerics::quadrature::QuadratureSpec;
pub use numerics::rng::RngStream;
