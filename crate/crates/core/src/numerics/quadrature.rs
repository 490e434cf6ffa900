//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Infinite limits are mapped onto finite ones with `x = a + t/(1 − t)`
//! (and its mirror), so the Kronrod nodes never touch the singular end of the
//! map. Error estimates follow the QUADPACK `qk15` heuristic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::domain(format!(
                "quadrature tolerances must be positive (abs {abs_tol}, rel {rel_tol})"
            )));
        }
        if max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    /// Same spec with both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64) {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let abs_half = half.abs();

    let fc = f(centre);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..3 {
        let k = 2 * j + 1;
        let dx = half * XGK[k];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[k] * (f1 + f2);
        res_abs += WGK[k] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let k = 2 * j;
        let dx = half * XGK[k];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        res_k += WGK[k] * (f1 + f2);
        res_abs += WGK[k] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for k in 0..7 {
        res_asc += WGK[k] * ((fv1[k] - mean).abs() + (fv2[k] - mean).abs());
    }

    let result = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Adaptive integration of `f` over a finite interval.
fn integrate_finite<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if lo == hi {
        return Ok((0.0, 0.0));
    }
    let (value, error) = kronrod15(&mut f, lo, hi);
    if !value.is_finite() {
        return Err(Error::domain(format!(
            "integrand is not finite on [{lo}, {hi}]"
        )));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel { lo, hi, value, error });
    let mut total = value;
    let mut total_err = error;
    // Panels too narrow to split further; their error is frozen.
    let mut frozen_val = 0.0;
    let mut frozen_err = 0.0;
    let mut subdivisions = 0;

    while total_err > spec.target(total) {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo.min(worst.hi) || mid >= worst.lo.max(worst.hi) {
            frozen_val += worst.value;
            frozen_err += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Convergence {
                estimate: total,
                error_bound: total_err,
                subdivisions,
            });
        }
        subdivisions += 1;
        let (v1, e1) = kronrod15(&mut f, worst.lo, mid);
        let (v2, e2) = kronrod15(&mut f, mid, worst.hi);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::domain(format!(
                "integrand is not finite on [{}, {}]",
                worst.lo, worst.hi
            )));
        }
        heap.push(Panel { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Panel { lo: mid, hi: worst.hi, value: v2, error: e2 });

        // Re-summing keeps the running totals free of cancellation drift.
        total = heap.iter().map(|p| p.value).sum::<f64>() + frozen_val;
        total_err = heap.iter().map(|p| p.error).sum::<f64>() + frozen_err;
    }
    if total_err > spec.target(total) {
        return Err(Error::Convergence {
            estimate: total,
            error_bound: total_err,
            subdivisions,
        });
    }
    Ok((total, total_err))
}

/// Integrates `f` over `[lo, hi]`, where either limit may be infinite.
///
/// Returns the estimate; a [`Error::Convergence`] carries the best estimate
/// and its error bound when `max_subdivisions` is exhausted.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_with_error(f, lo, hi, spec).map(|(v, _)| v)
}

/// As [`integrate`], also returning the error estimate.
pub fn integrate_with_error<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    integrate_dyn(&mut f, lo, hi, spec)
}

fn integrate_dyn(
    f: &mut dyn FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::domain("integration limits must not be NaN"));
    }
    if lo > hi {
        return integrate_dyn(f, hi, lo, spec).map(|(v, e)| (-v, e));
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => integrate_finite(f, lo, hi, spec),
        (true, false) => integrate_finite(
            |t| {
                let s = 1.0 - t;
                if s <= 0.0 {
                    return 0.0;
                }
                f(lo + t / s) / (s * s)
            },
            0.0,
            1.0,
            spec,
        ),
        (false, true) => integrate_finite(
            |t| {
                let s = 1.0 - t;
                if s <= 0.0 {
                    return 0.0;
                }
                f(hi - t / s) / (s * s)
            },
            0.0,
            1.0,
            spec,
        ),
        (false, false) => {
            let half = spec.scaled(0.5);
            let (a, ea) = integrate_dyn(f, f64::NEG_INFINITY, 0.0, &half)?;
            let (b, eb) = integrate_dyn(f, 0.0, f64::INFINITY, &half)?;
            Ok((a + b, ea + eb))
        }
    }
}

/// Integrates over consecutive segments `points[0]..points[1]..…`, useful
/// when the integrand has kinks at known locations. Interior break points
/// outside the outer range are dropped and the rest sorted.
pub fn integrate_piecewise<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| b.is_finite() && *b > lo && *b < hi)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let n = points.len() + 1;
    let piece = spec.scaled(1.0 / n as f64);
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(lo);
    edges.extend(points);
    edges.push(hi);
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += integrate(&mut f, w[0], w[1], &piece)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::gumbel_pdf;

    #[test]
    fn closed_form_integrals() {
        let spec = QuadratureSpec::default();
        let e = integrate(|x| (-x).exp(), 0.0, f64::INFINITY, &spec).unwrap();
        assert!((e - 1.0).abs() < 1e-9);
        let one = integrate(|_| 1.0, 0.0, 1.0, &spec).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        let g = integrate(gumbel_pdf, f64::NEG_INFINITY, f64::INFINITY, &spec).unwrap();
        assert!((g - 1.0).abs() < 1e-9);
        let s = integrate(f64::sin, 0.0, std::f64::consts::PI, &spec).unwrap();
        assert!((s - 2.0).abs() < 1e-9);
        let left = integrate(|x| x.exp(), f64::NEG_INFINITY, 1.0, &spec).unwrap();
        assert!((left - 1f64.exp()).abs() < 1e-9);
        let rev = integrate(|x| x * x, 1.0, 0.0, &spec).unwrap();
        assert!((rev + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn kinked_integrand_with_breaks() {
        let spec = QuadratureSpec::new(1e-12, 1e-12, 2000).unwrap();
        let v = integrate_piecewise(|x: f64| x.abs(), -1.0, 2.0, &[0.0, 7.0], &spec).unwrap();
        assert!((v - 2.5).abs() < 1e-12);
    }

    #[test]
    fn exhausted_subdivisions_report_best_estimate() {
        let spec = QuadratureSpec::new(1e-14, 1e-14, 3).unwrap();
        match integrate(|x: f64| (50.0 * x).sin() / (x + 1e-3), 0.0, 10.0, &spec) {
            Err(Error::Convergence {
                estimate,
                error_bound,
                subdivisions,
            }) => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
                assert_eq!(subdivisions, 3);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_spec_rejected() {
        assert!(QuadratureSpec::new(0.0, 1e-9, 10).is_err());
        assert!(QuadratureSpec::new(1e-9, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-9, 1e-9, 0).is_err());
    }

    #[test]
    fn non_finite_integrand_is_a_domain_error() {
        let spec = QuadratureSpec::default();
        assert!(matches!(
            integrate(|_| f64::NAN, 0.0, 1.0, &spec),
            Err(Error::Domain(_))
        ));
    }
}
