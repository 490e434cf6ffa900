use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::grid::Grid;

#[derive(Debug, Parser)]
#[command(
    name = "gamble",
    version,
    about = "Betting and decision models when probabilities are only roughly known",
    args_override_self = true
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed for every random stream.
    #[arg(long, global = true, env = "GAMBLE_SEED")]
    pub seed: Option<u64>,

    /// Monte Carlo replications per table cell.
    #[arg(long, global = true)]
    pub reps: Option<u64>,

    /// Absolute and relative quadrature tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output file; stdout when absent and GAMBLE_OUT_DIR is unset.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Noise {
    Normal,
    Uniform,
}

impl From<Noise> for gamble_core::NoiseKind {
    fn from(n: Noise) -> Self {
        match n {
            Noise::Normal => gamble_core::NoiseKind::Normal,
            Noise::Uniform => gamble_core::NoiseKind::Uniform,
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Bookmaker's mean gain h(u) against its own error, unbiased gamblers.
    #[command(name = "fig2-left")]
    Fig2Left(Fig2LeftArgs),
    /// h*(u, r) against gambler bias r for several bookmaker errors.
    #[command(name = "fig2-right")]
    Fig2Right(Fig2RightArgs),
    /// Skill game: gain to A against the opponent's error.
    Fig3(Fig3Args),
    /// Kelly growth rate against the edge for several errors.
    Fig4(Fig4Args),
    /// Mean cost of choosing the best item against the error.
    Fig5(Fig5Args),
    /// Mean gain to the auction winner under both protocols.
    Fig6(Fig6Args),
    /// Two-person bet at the midpoint price.
    Bet(BetArgs),
    /// Bookmaker with noisy own estimate and biased gamblers.
    Bookie(BookieArgs),
    /// Skill game gain, optionally checked by simulation.
    Skill(SkillArgs),
    /// Kelly growth with a noisy edge.
    Kelly(KellyArgs),
    /// Duel win probability with misjudged opponent accuracy.
    Duel(DuelArgs),
    /// Choosing the best item and auctions.
    Evt(EvtArgs),
    /// Prediction tournaments under the Brier score.
    Tournament(TournamentArgs),
    /// Two-action decision against nature.
    Nature(NatureArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fig2Left(_) => "fig2-left",
            Command::Fig2Right(_) => "fig2-right",
            Command::Fig3(_) => "fig3",
            Command::Fig4(_) => "fig4",
            Command::Fig5(_) => "fig5",
            Command::Fig6(_) => "fig6",
            Command::Bet(_) => "bet",
            Command::Bookie(_) => "bookie",
            Command::Skill(_) => "skill",
            Command::Kelly(_) => "kelly",
            Command::Duel(_) => "duel",
            Command::Evt(_) => "evt",
            Command::Tournament(_) => "tournament",
            Command::Nature(_) => "nature",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Fig2LeftArgs {
    /// Values of σ/L; u = (σ/L)² must stay within [0, 1/9].
    #[arg(long, default_value = "0:1/3:101")]
    pub sigma_over_l: Grid,
    /// Add a simulated column (gamblers on p ± L with this L).
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 0.1)]
    pub l: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Fig2RightArgs {
    #[arg(long, default_value = "0,1/36,2/36")]
    pub u: Grid,
    /// Gambler bias r = Δ/L.
    #[arg(long, default_value = "-1:1:81", allow_hyphen_values = true)]
    pub r: Grid,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Fig3Args {
    #[arg(long, default_value = "0.25,0.5,1")]
    pub sigma_a: Grid,
    #[arg(long, default_value = "0:2:81")]
    pub sigma_b: Grid,
    #[arg(long, value_enum, default_value_t = Noise::Normal)]
    pub zeta: Noise,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Fig4Args {
    #[arg(long, default_value = "0,0.02,0.05,0.1")]
    pub sigma: Grid,
    #[arg(long, default_value = "-0.1:0.1:81", allow_hyphen_values = true)]
    pub delta: Grid,
    /// Add simulated columns next to the closed form.
    #[arg(long)]
    pub mc: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Integral {
    None,
    Reduced,
    Triple,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Fig5Args {
    #[arg(long, default_value = "0:1:21")]
    pub sigma: Grid,
    /// Which quadrature cross-check column to add.
    #[arg(long, value_enum, default_value_t = Integral::Reduced)]
    pub integral: Integral,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Fig6Args {
    #[arg(long, default_value = "0:1:21")]
    pub sigma: Grid,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BetArgs {
    #[arg(long, default_value = "0,0.02,0.05,0.1")]
    pub sigma_a: Grid,
    #[arg(long, default_value = "0,0.02,0.05,0.1")]
    pub sigma_b: Grid,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = Noise::Normal)]
    pub noise: Noise,
    /// Gaussian-copula correlation between the two errors.
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BookieArgs {
    #[arg(long, default_value = "0,1/36,2/36")]
    pub u: Grid,
    #[arg(long, default_value = "-0.5:0.5:11", allow_hyphen_values = true)]
    pub r: Grid,
    #[arg(long, value_enum, default_value_t = Noise::Uniform)]
    pub noise: Noise,
    /// Gambler range half-width used by the simulation.
    #[arg(long, default_value_t = 0.1)]
    pub l: f64,
    /// Also search for the best interval by Nelder–Mead.
    #[arg(long)]
    pub optimize: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SkillArgs {
    #[arg(long, default_value = "0.5,1,0.25")]
    pub sigma_a: Grid,
    #[arg(long, default_value = "1,0.5,2")]
    pub sigma_b: Grid,
    #[arg(long, value_enum, default_value_t = Noise::Normal)]
    pub zeta: Noise,
    /// Pair the grids elementwise instead of taking all combinations.
    #[arg(long)]
    pub zip: bool,
    /// Add the windowed simulation (window half-width chosen from the errors).
    #[arg(long)]
    pub mc: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KellyArgs {
    #[arg(long, default_value = "-0.1,-0.05,0,0.05,0.1", allow_hyphen_values = true)]
    pub delta: Grid,
    #[arg(long, default_value = "0.01,0.05,0.1")]
    pub sigma: Grid,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DuelArgs {
    #[arg(long, default_value_t = 2.0)]
    pub rho_a: f64,
    #[arg(long, default_value_t = 1.5)]
    pub rho_b: f64,
    /// rms of both duelists' errors about the opponent's ρ.
    #[arg(long, default_value = "0,0.005,0.01,0.02,0.05")]
    pub sigma: Grid,
    #[arg(long, value_enum, default_value_t = Noise::Normal)]
    pub noise: Noise,
    /// Add a simulated column.
    #[arg(long)]
    pub mc: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvtArgs {
    #[arg(long, default_value = "0,0.25,0.5")]
    pub sigma: Grid,
    /// Also evaluate the nested triple integral for the choice cost.
    #[arg(long)]
    pub triple: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_conflicts_with_subcommands = true)]
pub struct TournamentArgs {
    #[command(subcommand)]
    pub action: Option<TournamentAction>,
    #[arg(long, default_value_t = 100)]
    pub questions: usize,
    #[arg(long, default_value = "0.2,0.18,0.15,0.1")]
    pub rms_you: Grid,
    #[arg(long, default_value_t = 0.2)]
    pub rms_rival: f64,
    #[arg(long, default_value_t = 0.2)]
    pub p_lo: f64,
    #[arg(long, default_value_t = 0.8)]
    pub p_hi: f64,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
pub enum TournamentAction {
    /// Total Brier score of a `q,outcome` record file.
    Score {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NatureArgs {
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub d: f64,
    /// Fixed true probability; when absent it is drawn from U(p_lo, p_hi).
    #[arg(long)]
    pub p_true: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    pub p_lo: f64,
    #[arg(long, default_value_t = 0.8)]
    pub p_hi: f64,
    #[arg(long, default_value = "0,0.01,0.02,0.04")]
    pub sigma: Grid,
    #[arg(long, value_enum, default_value_t = Noise::Normal)]
    pub noise: Noise,
}
