//! One table builder per subcommand.

use gamble_core::bookmaker::{self, GamblerPopulation, Policy};
use gamble_core::duel::{self, Method};
use gamble_core::extreme_value as evt;
use gamble_core::gentlemans_bet::{self, Dependence};
use gamble_core::kelly::{self, KellySetting};
use gamble_core::nature::{self, PTrue, UtilityQuad};
use gamble_core::skill_game::{self, SkillPerception, ZetaDist};
use gamble_core::tournament::{self, ContestantModel, PSampler};
use gamble_core::{ErrorModel, NoiseKind, Probability, QuadratureSpec, Result, RngStream};

use crate::args::*;
use crate::table::{format_sig, Table};

/// Everything besides the subcommand's own parameters.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub seed: u64,
    pub reps: u64,
    pub spec: QuadratureSpec,
}

impl Context {
    fn stream(&self, id: u64) -> RngStream {
        RngStream::new(self.seed, id)
    }
}

/// Replications used when `--reps` is not given.
pub fn default_reps(cmd: &Command) -> u64 {
    match cmd {
        Command::Fig2Left(_) | Command::Bookie(_) => 200_000,
        Command::Fig5(_) | Command::Fig6(_) | Command::Evt(_) | Command::Tournament(_) => 100_000,
        Command::Nature(_) => 400_000,
        _ => 1_000_000,
    }
}

pub struct Output {
    pub title: String,
    pub table: Table,
}

pub fn run(cmd: &Command, ctx: &Context) -> Result<Output> {
    match cmd {
        Command::Fig2Left(a) => fig2_left(a, ctx),
        Command::Fig2Right(a) => fig2_right(a, ctx),
        Command::Fig3(a) => fig3(a, ctx),
        Command::Fig4(a) => fig4(a, ctx),
        Command::Fig5(a) => fig5(a, ctx),
        Command::Fig6(a) => fig6(a, ctx),
        Command::Bet(a) => bet(a, ctx),
        Command::Bookie(a) => bookie(a, ctx),
        Command::Skill(a) => skill(a, ctx),
        Command::Kelly(a) => kelly_cmd(a, ctx),
        Command::Duel(a) => duel_cmd(a, ctx),
        Command::Evt(a) => evt_cmd(a, ctx),
        Command::Tournament(a) => tournament_cmd(a, ctx),
        Command::Nature(a) => nature_cmd(a, ctx),
    }
}

fn tag(prefix: &str, v: f64) -> String {
    format!("{prefix}{}", format_sig(v))
}

fn out(title: &str, table: Table) -> Result<Output> {
    Ok(Output {
        title: title.to_string(),
        table,
    })
}

fn fig2_left(a: &Fig2LeftArgs, ctx: &Context) -> Result<Output> {
    let mut cols = vec!["sigma_over_l".to_string(), "u".into(), "h".into()];
    if a.mc {
        cols.extend(["h_mc".into(), "h_mc_se".into()]);
    }
    let mut t = Table::new(cols);
    let pop = GamblerPopulation::new(0.5, a.l, 1.0)?;
    let half = Probability::new(0.5)?;
    for &v in &a.sigma_over_l.values {
        let mut u = v * v;
        if u > 1.0 / 9.0 && u < 1.0 / 9.0 + 1e-15 {
            u = 1.0 / 9.0;
        }
        let mut row = vec![v, u, bookmaker::h(u)?];
        if a.mc {
            let noise = ErrorModel::with_rms(NoiseKind::Uniform, v.abs() * a.l)?;
            let e = bookmaker::simulate_bookmaker(half, &pop, &Policy::NoisyYStar(noise), ctx.reps, &ctx.stream(21))?;
            let l2 = a.l * a.l;
            row.extend([e.mean / l2, e.std_error / l2]);
        }
        t.push(row);
    }
    out("Mean gain to bookmaker per kappa L^2, unbiased gamblers", t)
}

fn fig2_right(a: &Fig2RightArgs, ctx: &Context) -> Result<Output> {
    let mut cols = vec!["r".to_string()];
    for label in ["uniform", "normal", "second_order"] {
        cols.extend(a.u.values.iter().map(|&u| tag(&format!("h_{label}_u"), u)));
    }
    let mut t = Table::new(cols);
    for &r in &a.r.values {
        let mut row = vec![r];
        for kind in [NoiseKind::Uniform, NoiseKind::Normal] {
            for &u in &a.u.values {
                row.push(bookmaker::h_star_with(u, r, kind, &ctx.spec)?);
            }
        }
        for &u in &a.u.values {
            row.push(bookmaker::h_star_second_order(u, r)?);
        }
        t.push(row);
    }
    out("Mean gain to bookmaker per kappa L^2 against gambler bias r", t)
}

fn zeta(n: Noise) -> ZetaDist {
    match n {
        Noise::Normal => ZetaDist::NormalStd,
        Noise::Uniform => ZetaDist::UniformStd,
    }
}

fn skill_gain(sa: f64, sb: f64, z: ZetaDist, spec: &QuadratureSpec) -> Result<f64> {
    if sa == 0.0 && sb == 0.0 {
        return Ok(0.0);
    }
    skill_game::expected_gain(&SkillPerception::new(sa, sb, z)?, spec)
}

fn fig3(a: &Fig3Args, ctx: &Context) -> Result<Output> {
    let mut cols = vec!["sigma_b".to_string()];
    cols.extend(a.sigma_a.values.iter().map(|&s| tag("gain_sigma_a", s)));
    let mut t = Table::new(cols);
    for &sb in &a.sigma_b.values {
        let mut row = vec![sb];
        for &sa in &a.sigma_a.values {
            row.push(skill_gain(sa, sb, zeta(a.zeta), &ctx.spec)?);
        }
        t.push(row);
    }
    out("Gain to A against opponent error", t)
}

fn fig4(a: &Fig4Args, ctx: &Context) -> Result<Output> {
    let mut cols = vec!["delta".to_string()];
    for &s in &a.sigma.values {
        cols.push(tag("growth_sigma", s));
        if a.mc {
            cols.push(tag("growth_mc_sigma", s));
            cols.push(format!("{}_se", tag("growth_mc_sigma", s)));
        }
    }
    let mut t = Table::new(cols);
    for &d in &a.delta.values {
        let mut row = vec![d];
        for &s in &a.sigma.values {
            let st = KellySetting::new(d, s)?;
            row.push(kelly::expected_growth(&st));
            if a.mc {
                let e = kelly::simulate_expected_growth(&st, ctx.reps, &ctx.stream(41))?;
                row.extend([e.mean, e.std_error]);
            }
        }
        t.push(row);
    }
    out("Kelly growth rate", t)
}

fn fig5(a: &Fig5Args, ctx: &Context) -> Result<Output> {
    let mut cols = vec!["sigma".to_string(), "cost".into(), "cost_se".into()];
    match a.integral {
        Integral::None => {}
        Integral::Reduced => cols.push("cost_integral".into()),
        Integral::Triple => cols.push("cost_triple_integral".into()),
    }
    let mut t = Table::new(cols);
    for &s in &a.sigma.values {
        let e = evt::simulate_choice_cost(s, ctx.reps, &ctx.stream(51))?;
        let mut row = vec![s, e.mean, e.std_error];
        let integral = |f: fn(f64, &QuadratureSpec) -> Result<f64>| if s == 0.0 { Ok(0.0) } else { f(s, &ctx.spec) };
        match a.integral {
            Integral::None => {}
            Integral::Reduced => row.push(integral(evt::choice_cost_reduced)?),
            Integral::Triple => row.push(integral(evt::choice_cost_integral)?),
        }
        t.push(row);
    }
    out("Mean cost of choosing the best item", t)
}

fn fig6(a: &Fig6Args, ctx: &Context) -> Result<Output> {
    let mut t = Table::new(["sigma", "sealed", "sealed_se", "vickrey", "vickrey_se", "gap", "gap_se"]);
    for &s in &a.sigma.values {
        let e = evt::simulate_auction(s, ctx.reps, &ctx.stream(61))?;
        t.push(vec![
            s,
            e.sealed.mean,
            e.sealed.std_error,
            e.vickrey.mean,
            e.vickrey.std_error,
            e.gap.mean,
            e.gap.std_error,
        ]);
    }
    out("Mean gain to auction winner", t)
}

fn bet(a: &BetArgs, ctx: &Context) -> Result<Output> {
    let p = Probability::new(a.p)?;
    let dep = match a.rho {
        Some(r) => Dependence::GaussianCopula(r),
        None => Dependence::Independent,
    };
    let mut t = Table::new(["sigma_a", "sigma_b", "gain_a", "gain_a_mc", "gain_a_mc_se"]);
    for &sa in &a.sigma_a.values {
        for &sb in &a.sigma_b.values {
            let ma = ErrorModel::with_rms(a.noise.into(), sa)?;
            let mb = ErrorModel::with_rms(a.noise.into(), sb)?;
            let exact = gentlemans_bet::expected_gain_analytic(sa, sb, a.kappa)?;
            let e = gentlemans_bet::simulate_expected_gain(p, &ma, &mb, dep, a.kappa, ctx.reps, &ctx.stream(11))?;
            t.push(vec![sa, sb, exact, e.mean, e.std_error]);
        }
    }
    out("Mean gain to A in the two-person bet", t)
}

fn bookie(a: &BookieArgs, ctx: &Context) -> Result<Output> {
    let mut cols: Vec<String> = ["u", "r", "h_star", "h_star_second_order", "h_star_mc", "h_star_mc_se"]
        .map(String::from)
        .to_vec();
    if a.optimize {
        cols.extend(["best_offset", "best_half_width", "best_gain"].map(String::from));
    }
    let mut t = Table::new(cols);
    let kind: NoiseKind = a.noise.into();
    let half = Probability::new(0.5)?;
    let l2 = a.l * a.l;
    for &u in &a.u.values {
        for &r in &a.r.values {
            let exact = bookmaker::h_star_with(u, r, kind, &ctx.spec)?;
            let second = bookmaker::h_star_second_order(u, r)?;
            let pop = GamblerPopulation::new(0.5 + r * a.l, a.l, 1.0)?;
            let noise = ErrorModel::with_rms(kind, u.sqrt() * a.l)?;
            let e = bookmaker::simulate_bookmaker(half, &pop, &Policy::NoisyYStar(noise), ctx.reps, &ctx.stream(22))?;
            let mut row = vec![u, r, exact, second, e.mean / l2, e.std_error / l2];
            if a.optimize {
                let o = bookmaker::optimal_noisy_interval(u, r, kind)?;
                row.extend([o.offset, o.half_width, o.gain]);
            }
            t.push(row);
        }
    }
    out("Bookmaker gain per kappa L^2", t)
}

fn skill(a: &SkillArgs, ctx: &Context) -> Result<Output> {
    let pairs: Vec<(f64, f64)> = if a.zip {
        if a.sigma_a.values.len() != a.sigma_b.values.len() {
            return Err(gamble_core::Error::Domain(format!(
                "--zip needs grids of equal length ({} vs {})",
                a.sigma_a.values.len(),
                a.sigma_b.values.len()
            )));
        }
        a.sigma_a.values.iter().copied().zip(a.sigma_b.values.iter().copied()).collect()
    } else {
        a.sigma_a
            .values
            .iter()
            .flat_map(|&x| a.sigma_b.values.iter().map(move |&y| (x, y)))
            .collect()
    };
    let mut cols = vec!["sigma_a".to_string(), "sigma_b".into(), "gain".into()];
    if a.mc {
        cols.extend(["gain_mc".into(), "gain_mc_se".into()]);
    }
    let mut t = Table::new(cols);
    let z = zeta(a.zeta);
    for (sa, sb) in pairs {
        let mut row = vec![sa, sb, skill_gain(sa, sb, z, &ctx.spec)?];
        if a.mc {
            let perc = SkillPerception::new(sa, sb, z)?;
            let w = 7.5 * sa.max(sb);
            let e = skill_game::simulate_match_rate(&perc, w, ctx.reps, &ctx.stream(31))?;
            row.extend([e.mean, e.std_error]);
        }
        t.push(row);
    }
    out("Skill game gain to A", t)
}

fn kelly_cmd(a: &KellyArgs, ctx: &Context) -> Result<Output> {
    let mut t = Table::new(["delta", "sigma", "growth", "growth_mc", "growth_mc_se"]);
    for &d in &a.delta.values {
        for &s in &a.sigma.values {
            let st = KellySetting::new(d, s)?;
            let e = kelly::simulate_expected_growth(&st, ctx.reps, &ctx.stream(42))?;
            t.push(vec![d, s, kelly::expected_growth(&st), e.mean, e.std_error]);
        }
    }
    out("Kelly growth rate", t)
}

fn duel_cmd(a: &DuelArgs, ctx: &Context) -> Result<Output> {
    let mut cols = vec!["sigma".to_string(), "win_known".into(), "win".into(), "deviation".into()];
    if a.mc {
        cols.extend(["win_mc".into(), "win_mc_se".into()]);
    }
    let mut t = Table::new(cols);
    let known = duel::win_prob_known(a.rho_a, a.rho_b)?.value();
    for &s in &a.sigma.values {
        let n = ErrorModel::with_rms(a.noise.into(), s)?;
        let q = duel::expected_win_prob(a.rho_a, a.rho_b, &n, &n, &Method::Quadrature(ctx.spec))?;
        let mut row = vec![s, known, q.mean, q.mean - known];
        if a.mc {
            let m = Method::MonteCarlo {
                reps: ctx.reps,
                stream: ctx.stream(71),
            };
            let e = duel::expected_win_prob(a.rho_a, a.rho_b, &n, &n, &m)?;
            row.extend([e.mean, e.std_error]);
        }
        t.push(row);
    }
    out("Probability that A wins the duel", t)
}

fn evt_cmd(a: &EvtArgs, ctx: &Context) -> Result<Output> {
    let mut cols: Vec<String> = ["sigma", "cost", "cost_se", "cost_integral"].map(String::from).to_vec();
    if a.triple {
        cols.push("cost_triple_integral".into());
    }
    cols.extend(["sealed", "sealed_se", "vickrey", "vickrey_se", "gap", "gap_se"].map(String::from));
    let mut t = Table::new(cols);
    for &s in &a.sigma.values {
        let c = evt::simulate_choice_cost(s, ctx.reps, &ctx.stream(52))?;
        let mut row = vec![s, c.mean, c.std_error];
        row.push(if s == 0.0 { 0.0 } else { evt::choice_cost_reduced(s, &ctx.spec)? });
        if a.triple {
            row.push(if s == 0.0 { 0.0 } else { evt::choice_cost_integral(s, &ctx.spec)? });
        }
        let e = evt::simulate_auction(s, ctx.reps, &ctx.stream(62))?;
        row.extend([
            e.sealed.mean,
            e.sealed.std_error,
            e.vickrey.mean,
            e.vickrey.std_error,
            e.gap.mean,
            e.gap.std_error,
        ]);
        t.push(row);
    }
    out("Choosing the best item and auctions", t)
}

fn tournament_cmd(a: &TournamentArgs, ctx: &Context) -> Result<Output> {
    if let Some(TournamentAction::Score { file }) = &a.action {
        let text = std::fs::read_to_string(file)
            .map_err(|e| gamble_core::Error::Domain(format!("cannot read {}: {e}", file.display())))?;
        let recs = tournament::parse_records(&text)?;
        if recs.is_empty() {
            return Err(gamble_core::Error::Domain(format!("{} holds no records", file.display())));
        }
        let total = tournament::total_score(&recs)?;
        let mut t = Table::new(["questions", "total_score", "mean_score"]);
        t.push(vec![recs.len() as f64, total, total / recs.len() as f64]);
        return out("Brier score", t);
    }
    let mut t = Table::new([
        "rms_you",
        "rms_rival",
        "win_prob",
        "win_prob_se",
        "realized_rms_you",
        "realized_rms_you_se",
        "realized_rms_rival",
        "realized_rms_rival_se",
    ]);
    let rival = ContestantModel::normal(a.rms_rival)?;
    let sampler = PSampler::Uniform(a.p_lo, a.p_hi);
    for &r in &a.rms_you.values {
        let you = ContestantModel::normal(r)?;
        let e = tournament::simulate_tournament(a.questions, &you, &rival, &sampler, ctx.reps, &ctx.stream(81))?;
        t.push(vec![
            r,
            a.rms_rival,
            e.win_prob.mean,
            e.win_prob.std_error,
            e.realized_rms_you.mean,
            e.realized_rms_you.std_error,
            e.realized_rms_rival.mean,
            e.realized_rms_rival.std_error,
        ]);
    }
    out("Tournament win probability", t)
}

fn nature_cmd(a: &NatureArgs, ctx: &Context) -> Result<Output> {
    let theta = UtilityQuad::new(a.a, a.b, a.c, a.d)?;
    let p_true = match a.p_true {
        Some(p) => PTrue::Fixed(p),
        None => PTrue::Uniform(a.p_lo, a.p_hi),
    };
    let mut t = Table::new(["sigma", "p_crit", "z", "cost", "cost_se", "cost_exact"]);
    for &s in &a.sigma.values {
        let n = ErrorModel::with_rms(a.noise.into(), s)?;
        let e = nature::expected_cost(p_true, &n, &theta, ctx.reps, &ctx.stream(91))?;
        let exact = nature::expected_cost_analytic(p_true, &n, &theta, &ctx.spec)?;
        t.push(vec![s, theta.p_crit().value(), theta.z(), e.mean, e.std_error, exact]);
    }
    out("Expected cost of misjudging the probability of rain", t)
}
