//! Normal and Gumbel densities and distribution functions.
//!
//! The Normal cdf goes through `erfc` rather than a polynomial fit so that
//! tails keep full relative precision; the Kelly growth formula subtracts
//! nearly equal terms and needs it.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// `1 / sqrt(2π)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn std_normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Φ(z).
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// 1 − Φ(z), accurate deep into the upper tail.
pub fn std_normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z * FRAC_1_SQRT_2)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("normal scale must be positive, got {sigma}")))
    }
}

/// Density of Normal(0, σ²) at `x`.
pub fn normal_pdf(x: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(std_normal_pdf(x / sigma) / sigma)
}

/// Distribution function of Normal(0, σ²) at `x`.
pub fn normal_cdf(x: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(std_normal_cdf(x / sigma))
}

/// G(x) = exp(−e^(−x)).
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// g(x) = e^(−x) exp(−e^(−x)).
pub fn gumbel_pdf(x: f64) -> f64 {
    let t = (-x).exp();
    if t.is_infinite() {
        return 0.0;
    }
    t * (-t).exp()
}

/// Euler–Mascheroni constant, the mean of the standard Gumbel law.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::numerics::quadrature::{integrate, QuadratureSpec};

    #[test]
    fn normal_reference_values() {
        assert_eq!(normal_cdf(0.0, 1.0).unwrap(), 0.5);
        assert!((normal_pdf(0.0, 1.0).unwrap() - 0.398_942_280).abs() < 1e-9);
        assert!((INV_SQRT_2PI - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-16);
        // Φ(1) = 0.84134474606854294858...
        assert!((normal_cdf(1.0, 1.0).unwrap() - 0.841_344_746_068_542_9).abs() < 1e-12);
        // Φ(−5) = 2.8665157187919391e-7, checks relative accuracy in the tail
        let tail = std_normal_cdf(-5.0);
        assert!(((tail - 2.866_515_718_791_939e-7) / tail).abs() < 1e-12);
    }

    #[test]
    fn normal_scale_must_be_positive() {
        assert!(matches!(normal_pdf(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(normal_cdf(0.0, -1.0), Err(Error::Domain(_))));
        assert!(normal_cdf(0.0, f64::NAN).is_err());
    }

    #[test]
    fn normal_pdf_integrates_to_one_and_cdf_is_monotone() {
        let spec = QuadratureSpec::default();
        for sigma in [0.1, 1.0, 3.0] {
            let total =
                integrate(|x| normal_pdf(x, sigma).unwrap(), f64::NEG_INFINITY, f64::INFINITY, &spec)
                    .unwrap();
            assert!((total - 1.0).abs() < 1e-9, "sigma={sigma} total={total}");
        }
        let mut prev = 0.0;
        for i in -400..=400 {
            let c = normal_cdf(i as f64 * 0.025, 1.0).unwrap();
            assert!(c >= prev);
            prev = c;
        }
        assert_eq!(std_normal_cdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(std_normal_cdf(f64::INFINITY), 1.0);
    }

    #[test]
    fn gumbel_values() {
        assert!((gumbel_cdf(0.0) - 0.367_879_441).abs() < 1e-9);
        assert!((gumbel_cdf(50.0) - 1.0).abs() < 1e-15);
        assert_eq!(gumbel_cdf(-50.0), 0.0);
        let spec = QuadratureSpec::default();
        let total = integrate(gumbel_pdf, f64::NEG_INFINITY, f64::INFINITY, &spec).unwrap();
        assert!((total - 1.0).abs() < 1e-9);
        // g = dG/dx
        for x in [-2.0, -0.5, 0.0, 0.7, 3.0] {
            let h = 1e-5;
            let fd = (gumbel_cdf(x + h) - gumbel_cdf(x - h)) / (2.0 * h);
            assert!((fd - gumbel_pdf(x)).abs() < 1e-9);
        }
    }
}
