//! Probabilities and the zero-mean perception error ξ in `p_perc = p_true + ξ`.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::quadrature::{integrate_piecewise, QuadratureSpec};
use super::special::{std_normal_cdf, std_normal_pdf, std_normal_sf};
use crate::error::{Error, Result};

/// A number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::domain(format!("probability must lie in [0, 1], got {value}")))
        }
    }

    pub const fn value(self) -> f64 {
        self.0
    }

    /// For values that are in range by construction.
    pub(crate) fn new_unchecked(value: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&value), "{value}");
        Self(value)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// Normal(0, scale²).
    Normal,
    /// Uniform(−scale, scale).
    Uniform,
}

/// Zero-mean perception noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    kind: NoiseKind,
    scale: f64,
}

const SQRT_3: f64 = 1.732_050_807_568_877_2;

const NORMAL_PANELS: [f64; 9] = [-10.0, -6.0, -3.0, -1.5, 0.0, 1.5, 3.0, 6.0, 10.0];

impl ErrorModel {
    pub fn new(kind: NoiseKind, scale: f64) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::domain(format!(
                "noise scale must be finite and nonnegative, got {scale}"
            )));
        }
        Ok(Self { kind, scale })
    }

    pub fn normal(sigma: f64) -> Result<Self> {
        Self::new(NoiseKind::Normal, sigma)
    }

    pub fn uniform(half_width: f64) -> Result<Self> {
        Self::new(NoiseKind::Uniform, half_width)
    }

    /// Noise of the given shape whose standard deviation is `rms`.
    pub fn with_rms(kind: NoiseKind, rms: f64) -> Result<Self> {
        match kind {
            NoiseKind::Normal => Self::new(kind, rms),
            NoiseKind::Uniform => Self::new(kind, rms * SQRT_3),
        }
    }

    pub fn none() -> Self {
        Self {
            kind: NoiseKind::Normal,
            scale: 0.0,
        }
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_degenerate(&self) -> bool {
        self.scale == 0.0
    }

    pub fn variance(&self) -> f64 {
        match self.kind {
            NoiseKind::Normal => self.scale * self.scale,
            NoiseKind::Uniform => self.scale * self.scale / 3.0,
        }
    }

    pub fn rms(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        match self.kind {
            NoiseKind::Normal => {
                let z: f64 = StandardNormal.sample(rng);
                self.scale * z
            }
            NoiseKind::Uniform => self.scale * (2.0 * rng.random::<f64>() - 1.0),
        }
    }

    /// Maps a standard Normal variate onto this distribution by matching
    /// quantiles. Feeding correlated Normals gives a Gaussian copula.
    pub fn from_standard_normal(&self, z: f64) -> f64 {
        match self.kind {
            NoiseKind::Normal => self.scale * z,
            NoiseKind::Uniform => self.scale * (2.0 * std_normal_cdf(z) - 1.0),
        }
    }

    /// P(ξ ≤ x). A degenerate model is a unit step at 0 with value ½ there.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.scale == 0.0 {
            return if x > 0.0 {
                1.0
            } else if x < 0.0 {
                0.0
            } else {
                0.5
            };
        }
        match self.kind {
            NoiseKind::Normal => std_normal_cdf(x / self.scale),
            NoiseKind::Uniform => ((x + self.scale) / (2.0 * self.scale)).clamp(0.0, 1.0),
        }
    }

    /// P(ξ > x).
    pub fn sf(&self, x: f64) -> f64 {
        if self.scale == 0.0 {
            return 1.0 - self.cdf(x);
        }
        match self.kind {
            NoiseKind::Normal => std_normal_sf(x / self.scale),
            NoiseKind::Uniform => ((self.scale - x) / (2.0 * self.scale)).clamp(0.0, 1.0),
        }
    }

    /// Density; only meaningful for a non-degenerate model.
    pub fn pdf(&self, x: f64) -> f64 {
        match self.kind {
            NoiseKind::Normal => std_normal_pdf(x / self.scale) / self.scale,
            NoiseKind::Uniform => {
                if x.abs() <= self.scale {
                    0.5 / self.scale
                } else {
                    0.0
                }
            }
        }
    }

    /// Probability that `center + ξ` falls outside `[lo, hi]`.
    pub fn prob_outside(&self, center: f64, lo: f64, hi: f64) -> f64 {
        if self.scale == 0.0 {
            return if (lo..=hi).contains(&center) { 0.0 } else { 1.0 };
        }
        self.cdf(lo - center) + self.sf(hi - center)
    }

    /// E[f(ξ)] by quadrature. `kinks` lists points (in ξ units) where `f`
    /// is not smooth, so panels can be split there.
    pub fn expect<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        kinks: &[f64],
        spec: &QuadratureSpec,
    ) -> Result<f64> {
        if self.scale == 0.0 {
            return Ok(f(0.0));
        }
        match self.kind {
            NoiseKind::Normal => {
                let s = self.scale;
                // Work in standard units, pre-split so no panel is much wider
                // than the bulk of the density. Beyond 40σ the weight
                // underflows relative to any bounded integrand.
                let mut breaks: Vec<f64> = NORMAL_PANELS.to_vec();
                breaks.extend(kinks.iter().map(|k| k / s));
                let v = integrate_piecewise(
                    |z| f(s * z) * std_normal_pdf(z),
                    -40.0,
                    40.0,
                    &breaks,
                    spec,
                )?;
                Ok(v)
            }
            NoiseKind::Uniform => {
                let w = self.scale;
                let v = integrate_piecewise(&mut f, -w, w, kinks, spec)?;
                Ok(v / (2.0 * w))
            }
        }
    }
}

/// Largest probability of a perceived value leaving `[0, 1]` that the
/// simulators accept before refusing to run; beyond it, clamping would bias
/// the zero-mean error the closed forms rely on.
pub const MAX_CLAMP_PROBABILITY: f64 = 1e-6;

/// Rejects `(center, noise)` pairs where `center + ξ` leaves `[0, 1]` with
/// probability at least [`MAX_CLAMP_PROBABILITY`].
pub fn check_clamp_negligible(center: f64, noise: &ErrorModel, what: &str) -> Result<()> {
    let p = noise.prob_outside(center, 0.0, 1.0);
    if p < MAX_CLAMP_PROBABILITY {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what}: perceived probability {center} + ξ (rms {:.4}) leaves [0, 1] with probability {p:.3e}; \
             clamping would bias the error",
            noise.rms()
        )))
    }
}
