//! Prediction tournaments scored by the Brier rule.
//!
//! Announcing `q` on an event of true probability `p` has expected score
//! `p(1−p) + (q−p)²`. The first term is common to everyone, so differences in
//! total score estimate differences in mean squared forecast error.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::mc::{simulate_many, Estimate};
use crate::numerics::noise::{ErrorModel, Probability};
use crate::numerics::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TournamentRecord {
    /// Stated forecast.
    pub q: Probability,
    /// True probability, when known.
    pub p: Option<Probability>,
    /// Resolved outcome, when known.
    pub outcome: Option<bool>,
}

impl TournamentRecord {
    pub fn new(q: f64, p: f64) -> Result<Self> {
        Ok(Self {
            q: Probability::new(q)?,
            p: Some(Probability::new(p)?),
            outcome: None,
        })
    }
}

/// `(1 − q)²` if the event happened, `q²` otherwise. Lower is better.
pub fn brier_score(q: Probability, happened: bool) -> f64 {
    let q = q.value();
    if happened {
        (1.0 - q) * (1.0 - q)
    } else {
        q * q
    }
}

fn true_p(r: &TournamentRecord, i: usize) -> Result<f64> {
    r.p
        .map(Probability::value)
        .ok_or_else(|| Error::domain(format!("record {i} has no true probability")))
}

/// `Σ p(1−p) + Σ (q−p)²`.
pub fn expected_score(records: &[TournamentRecord]) -> Result<f64> {
    let mut irreducible = 0.0;
    let mut error = 0.0;
    for (i, r) in records.iter().enumerate() {
        let p = true_p(r, i)?;
        let d = r.q.value() - p;
        irreducible += p * (1.0 - p);
        error += d * d;
    }
    Ok(irreducible + error)
}

/// `√(n⁻¹ Σ (q−p)²)`.
pub fn rms_error(records: &[TournamentRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::domain("no records"));
    }
    let mut ss = 0.0;
    for (i, r) in records.iter().enumerate() {
        let d = r.q.value() - true_p(r, i)?;
        ss += d * d;
    }
    Ok((ss / records.len() as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreGap {
    /// `E S − E Ŝ`.
    pub gap: f64,
    pub sigma_you: f64,
    pub sigma_rival: f64,
}

impl ScoreGap {
    /// `n(σ² − σ̂²)`, which equals [`ScoreGap::gap`].
    pub fn identity_value(&self, n: usize) -> f64 {
        n as f64 * (self.sigma_you * self.sigma_you - self.sigma_rival * self.sigma_rival)
    }
}

/// Expected score difference between two contestants on the same questions,
/// with both RMS errors. The exact relation is `E S − E Ŝ = n(σ² − σ̂²)`.
pub fn score_gap_identity(you: &[TournamentRecord], rival: &[TournamentRecord]) -> Result<ScoreGap> {
    if you.len() != rival.len() || you.is_empty() {
        return Err(Error::domain(format!(
            "contestants must answer the same nonempty question set ({} vs {})",
            you.len(),
            rival.len()
        )));
    }
    for (i, (a, b)) in you.iter().zip(rival).enumerate() {
        if true_p(a, i)? != true_p(b, i)? {
            return Err(Error::domain(format!("question {i} has different true probabilities")));
        }
    }
    Ok(ScoreGap {
        gap: expected_score(you)? - expected_score(rival)?,
        sigma_you: rms_error(you)?,
        sigma_rival: rms_error(rival)?,
    })
}

/// How a contestant's forecasts are generated: `q = clamp(p + ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContestantModel {
    pub noise: ErrorModel,
    /// Forecasts are clamped to this range; `None` clamps to `[0, 1]`.
    pub clamp: Option<(f64, f64)>,
}

/// Forecast clamp of the default tournament model.
pub const DEFAULT_CLAMP: (f64, f64) = (0.01, 0.99);

impl ContestantModel {
    /// Normal errors with the given rms, clamped to [`DEFAULT_CLAMP`].
    pub fn normal(rms: f64) -> Result<Self> {
        Ok(Self {
            noise: ErrorModel::normal(rms)?,
            clamp: Some(DEFAULT_CLAMP),
        })
    }

    /// Nominal rms of the error before clamping.
    pub fn rms(&self) -> f64 {
        self.noise.rms()
    }

    fn forecast<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> f64 {
        let (lo, hi) = self.clamp.unwrap_or((0.0, 1.0));
        (p + self.noise.sample(rng)).clamp(lo, hi)
    }
}

/// Distribution of true probabilities across questions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PSampler {
    Fixed(f64),
    Uniform(f64, f64),
}

impl Default for PSampler {
    fn default() -> Self {
        PSampler::Uniform(0.2, 0.8)
    }
}

impl PSampler {
    fn validate(&self) -> Result<()> {
        match *self {
            PSampler::Fixed(p) => Probability::new(p).map(|_| ()),
            PSampler::Uniform(lo, hi) => {
                if (0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo < hi {
                    Ok(())
                } else {
                    Err(Error::domain(format!("bad uniform range [{lo}, {hi}]")))
                }
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            PSampler::Fixed(p) => p,
            PSampler::Uniform(lo, hi) => lo + (hi - lo) * rng.random::<f64>(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TournamentEstimate {
    /// Probability that "you" finish with the lower total score; ties count ½.
    pub win_prob: Estimate,
    /// Realised rms forecast error after clamping, averaged over tournaments.
    pub realized_rms_you: Estimate,
    pub realized_rms_rival: Estimate,
}

/// Simulates `reps` tournaments of `n_questions` each.
pub fn simulate_tournament(
    n_questions: usize,
    you: &ContestantModel,
    rival: &ContestantModel,
    p_sampler: &PSampler,
    reps: u64,
    stream: &RngStream,
) -> Result<TournamentEstimate> {
    if n_questions == 0 {
        return Err(Error::domain("a tournament needs at least one question"));
    }
    p_sampler.validate()?;
    for m in [you, rival] {
        if let Some((lo, hi)) = m.clamp {
            if !(0.0 <= lo && lo < hi && hi <= 1.0) {
                return Err(Error::domain(format!("bad clamp range [{lo}, {hi}]")));
            }
        }
    }
    let n = n_questions as f64;
    let [win, ry, rr] = simulate_many(reps, stream, |rng| {
        let (mut s_you, mut s_rival) = (0.0, 0.0);
        let (mut e_you, mut e_rival) = (0.0, 0.0);
        for _ in 0..n_questions {
            let p = p_sampler.sample(rng);
            let qy = you.forecast(p, rng);
            let qr = rival.forecast(p, rng);
            let happened = rng.random::<f64>() < p;
            s_you += brier_score(Probability::new_unchecked(qy), happened);
            s_rival += brier_score(Probability::new_unchecked(qr), happened);
            e_you += (qy - p) * (qy - p);
            e_rival += (qr - p) * (qr - p);
        }
        let w = if s_you < s_rival {
            1.0
        } else if s_you > s_rival {
            0.0
        } else {
            0.5
        };
        [w, (e_you / n).sqrt(), (e_rival / n).sqrt()]
    })?;
    Ok(TournamentEstimate {
        win_prob: win,
        realized_rms_you: ry,
        realized_rms_rival: rr,
    })
}

/// Parses `q,outcome` lines (outcome 0 or 1). A first line that does not
/// parse as a record is taken as a header; blank lines and `#` comments are
/// skipped.
pub fn parse_records(text: &str) -> Result<Vec<TournamentRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_line(line) {
            Ok(r) => out.push(r),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(Error::domain(format!("line {}: {e}", i + 1))),
        }
    }
    Ok(out)
}

fn parse_line(line: &str) -> std::result::Result<TournamentRecord, String> {
    let mut fields = line.split(',').map(str::trim);
    let (Some(q), Some(o), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(format!("expected `q,outcome`, got `{line}`"));
    };
    let q: f64 = q.parse().map_err(|_| format!("bad probability `{q}`"))?;
    let q = Probability::new(q).map_err(|e| e.to_string())?;
    let outcome = match o {
        "1" => true,
        "0" => false,
        _ => return Err(format!("outcome must be 0 or 1, got `{o}`")),
    };
    Ok(TournamentRecord {
        q,
        p: None,
        outcome: Some(outcome),
    })
}

/// Total Brier score of resolved records.
pub fn total_score(records: &[TournamentRecord]) -> Result<f64> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.outcome
                .map(|o| brier_score(r.q, o))
                .ok_or_else(|| Error::domain(format!("record {i} is unresolved")))
        })
        .sum()
}
