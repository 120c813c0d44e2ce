//! Pointwise inequality checks, circle asymptotics and Riesz bounds for the
//! spline symbol.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::hurwitz_zeta;
use crate::special::{binomial, cpow};
use crate::spline::{fourier_transform, numerator, omega_real_imag, omega_unchecked, spline_symbol, SplineSpec};

/// Default slack for exact inequalities.
pub const DEFAULT_SLACK: f64 = 1e-12;

/// Outcome of a pointwise check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckResult {
    pub name: String,
    pub grid_size: usize,
    pub max_violation: f64,
    pub passed: bool,
}

impl BoundCheckResult {
    /// Builds a result that passes iff `max_violation <= slack`.
    pub fn new(name: impl Into<String>, grid_size: usize, max_violation: f64, slack: f64) -> Self {
        Self {
            name: name.into(),
            grid_size,
            max_violation,
            passed: max_violation <= slack,
        }
    }

    /// One JSON line `{name, grid_size, max_violation, passed}`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

/// Deterministic uniform grid of `n` points on `[lo, hi]` (inclusive).
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Reproducible pseudo-random grid on `[lo, hi]` (SplitMix64 stream).
pub fn random_grid(lo: f64, hi: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed;
    (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            lo + (hi - lo) * ((z >> 11) as f64 / (1u64 << 53) as f64)
        })
        .collect()
}

fn max_violation(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

/// `(1 - cos x)/x^2 <= 1/2 <= (cosh x - 1)/x^2`, using the half-angle forms
/// `2 sin^2(x/2)/x^2` and `2 sinh^2(x/2)/x^2` (limit 1/2 at `x = 0`).
pub fn check_cos_cosh_lemma(x_grid: &[f64]) -> BoundCheckResult {
    let v = max_violation(x_grid.iter().map(|&x| {
        if x == 0.0 {
            return 0.0;
        }
        let h = x / 2.0;
        let lower = 2.0 * h.sin().powi(2) / (x * x);
        let upper = 2.0 * h.sinh().powi(2) / (x * x);
        (lower - 0.5).max(0.5 - upper).max(0.0)
    }));
    BoundCheckResult::new("cos-cosh lemma", x_grid.len(), v, DEFAULT_SLACK)
}

/// `e^{-a/2} |Omega(w)| <= |Omega(w, a)| <= 1 + |Omega(w)|`.
pub fn check_omega_sandwich(a: f64, omega_grid: &[f64]) -> Result<BoundCheckResult> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("sandwich bounds need a > 0 (got {a})")));
    }
    let lo = (-a / 2.0).exp();
    let v = max_violation(omega_grid.iter().map(|&om| {
        let m0 = omega_unchecked(om, 0.0).norm();
        let ma = omega_unchecked(om, a).norm();
        (lo * m0 - ma).max(ma - (1.0 + m0)).max(0.0)
    }));
    Ok(BoundCheckResult::new(format!("omega sandwich a={a}"), omega_grid.len(), v, DEFAULT_SLACK))
}

/// `e^{-a Re z/2 - 2 pi |Im z|} |B_z| <= |E_z^a| <= 1 + 2^{Re z} e^{2 pi |Im z|} |B_z|`.
pub fn check_spline_sandwich(spec: &SplineSpec, omega_grid: &[f64]) -> Result<BoundCheckResult> {
    let a = spec.a();
    if !(a > 0.0) {
        return Err(Error::Domain(format!("spline sandwich bounds need a > 0 (got {a})")));
    }
    let z = spec.z();
    let lo = (-a * z.re / 2.0 - 2.0 * PI * z.im.abs()).exp();
    let hi = 2f64.powf(z.re) * (2.0 * PI * z.im.abs()).exp();
    let v = max_violation(omega_grid.iter().map(|&om| {
        let b = spline_symbol(z, om, 0.0).norm();
        let e = fourier_transform(spec, om).norm();
        (lo * b - e).max(e - (1.0 + hi * b)).max(0.0)
    }));
    Ok(BoundCheckResult::new(
        format!("spline sandwich z={} a={a}", crate::special::fmt_complex(z)),
        omega_grid.len(),
        v,
        DEFAULT_SLACK,
    ))
}

/// Residual of the exact circle identity
/// `(f - 1/2a)^2 + g^2 - 1/4a^2 = e^{-a}(-w sin w / a + e^{-a} - cos w)/(a^2 + w^2)`.
pub fn circle_identity_residual(omega: f64, a: f64) -> Result<f64> {
    let (f, g) = omega_real_imag(omega, a)?;
    let lhs = (f - 1.0 / (2.0 * a)).powi(2) + g * g - 1.0 / (4.0 * a * a);
    let ea = (-a).exp();
    let rhs = ea * (-omega * omega.sin() / a + ea - omega.cos()) / (a * a + omega * omega);
    Ok((lhs - rhs).abs())
}

/// Deviation from the circle of radius `1/2a` centred at `1/2a` for one `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleDeviation {
    pub a: f64,
    pub max_deviation: f64,
    pub envelope: f64,
    pub constant: f64,
}

/// Result of the circle asymptotics study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleAsymptotics {
    pub identity: BoundCheckResult,
    pub deviations: Vec<CircleDeviation>,
    pub fitted_constant: f64,
    /// Observed over predicted decay ratio between consecutive `a` values.
    pub ratio_factors: Vec<f64>,
    pub summary: BoundCheckResult,
}

/// Exact identity residual over the grid plus the decay of the deviation
/// envelope `e^{-2a}/a^2 + e^{-a}/a^2` across `a_values`.
///
/// Passes when the identity residual stays below 1e-13, the fitted constant
/// is finite, and consecutive deviation ratios match the predicted
/// `e^{-(a2-a1)} (a1/a2)^2` within a factor of 5.
pub fn check_circle_asymptotics(a_values: &[f64], omega_grid: &[f64]) -> Result<CircleAsymptotics> {
    let mut ident = 0.0f64;
    let mut devs = Vec::new();
    for &a in a_values {
        let mut dev = 0.0f64;
        for &om in omega_grid {
            ident = ident.max(circle_identity_residual(om, a)?);
            let (f, g) = omega_real_imag(om, a)?;
            dev = dev.max(((f - 1.0 / (2.0 * a)).powi(2) + g * g - 1.0 / (4.0 * a * a)).abs());
        }
        let envelope = ((-2.0 * a).exp() + (-a).exp()) / (a * a);
        devs.push(CircleDeviation { a, max_deviation: dev, envelope, constant: dev / envelope });
    }
    let fitted = devs.iter().map(|d| d.constant).fold(0.0, f64::max);
    let ratios: Vec<f64> = devs
        .windows(2)
        .map(|p| {
            let observed = p[1].max_deviation / p[0].max_deviation;
            let predicted = p[1].envelope / p[0].envelope;
            observed / predicted
        })
        .collect();
    let n = a_values.len() * omega_grid.len();
    let identity = BoundCheckResult::new("circle identity", n, ident, 1e-13);
    let worst_ratio = ratios.iter().map(|r| r.max(1.0 / r)).fold(1.0, f64::max);
    let summary = BoundCheckResult {
        name: "circle asymptotics".into(),
        grid_size: n,
        max_violation: (worst_ratio - 5.0).max(0.0),
        passed: identity.passed && fitted.is_finite() && worst_ratio <= 5.0,
    };
    Ok(CircleAsymptotics { identity, deviations: devs, fitted_constant: fitted, ratio_factors: ratios, summary })
}

/// Periodized squared modulus at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszSum {
    /// Best estimate: partial sum plus asymptotic tail.
    pub value: f64,
    /// `sum_{|k| <= k_max}`, a rigorous lower bound.
    pub partial: f64,
    /// Rigorous upper bound on the discarded tail.
    pub tail_bound: f64,
}

/// Default truncation for [`riesz_sum`].
pub const RIESZ_K_MAX: usize = 64;

fn reduce(omega: f64, period: f64) -> f64 {
    omega - period * (omega / period).round()
}

/// `sum_k |E_z^a(omega + 2 pi k)|^2`.
///
/// Beyond `k_max` every term equals `|N|^2 |w + 2 pi i k|^{-2z}` with
/// `N = (1 - e^{-w})^z`; its large-`k` expansion is summed with Hurwitz zeta
/// values, and a separate rigorous bound is reported.
pub fn riesz_sum(spec: &SplineSpec, omega: f64, k_max: usize) -> RieszSum {
    let om = reduce(omega, 2.0 * PI);
    let z = spec.z();
    let a = spec.a();
    let k = k_max as i64;
    let partial: f64 = (-k..=k)
        .map(|j| fourier_transform(spec, om + 2.0 * PI * j as f64).norm_sqr())
        .sum();
    let n2 = cpow(numerator(om, a), z).norm_sqr();
    let (x, y) = (z.re, z.im);
    let kf = k_max.max(1) as f64;
    let bound = n2 * ((PI * y.max(0.0)).exp() + (PI * (-y).max(0.0)).exp())
        * (2.0 * PI * kf - PI).powf(1.0 - 2.0 * x)
        / (2.0 * PI * (2.0 * x - 1.0));
    let tail = if n2 == 0.0 { 0.0 } else { n2 * riesz_tail_series(z, om, a, k_max.max(1)) };
    RieszSum { value: partial + tail, partial, tail_bound: bound }
}

/// `sum_{|k| > K} |w + 2 pi i k|^{-2z}` (modulus form) via the expansion
/// `(2 pi k + q)^{-z} = (2 pi k)^{-z} sum_m binom(-z, m) (q / 2 pi k)^m`
/// with `q = omega - i a`.
fn riesz_tail_series(z: Complex64, omega: f64, a: f64, k: usize) -> f64 {
    const TERMS: usize = 16;
    let q = Complex64::new(omega, -a) / (2.0 * PI);
    let alpha: Vec<Complex64> = (0..TERMS).map(|m| binomial(-z, m) * q.powi(m as i32)).collect();
    let (x, y) = (z.re, z.im);
    let mut total = 0.0;
    for j in 0..TERMS {
        let d: f64 = (0..=j).map(|m| (alpha[m] * alpha[j - m].conj()).re).sum();
        let sides = (PI * y).exp() + if j % 2 == 0 { 1.0 } else { -1.0 } * (-PI * y).exp();
        let s = 2.0 * x + j as f64;
        total += d * sides * hurwitz_zeta(s, k as f64 + 1.0);
    }
    total * (2.0 * PI).powf(-2.0 * x)
}

/// Riesz bounds over a uniform grid on `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszBounds {
    /// Minimum of the partial sums: a certified lower bound on `A`.
    pub lower: f64,
    /// Maximum of partial sums plus tail bound: a certified upper bound on `B`.
    pub upper: f64,
    /// Minimum and maximum of the best estimates.
    pub min_estimate: f64,
    pub max_estimate: f64,
    pub grid_size: usize,
}

pub fn riesz_bounds(spec: &SplineSpec, grid_size: usize, k_max: usize) -> RieszBounds {
    let mut b = RieszBounds {
        lower: f64::INFINITY,
        upper: 0.0,
        min_estimate: f64::INFINITY,
        max_estimate: 0.0,
        grid_size,
    };
    for i in 0..grid_size {
        let om = 2.0 * PI * i as f64 / grid_size as f64;
        let r = riesz_sum(spec, om, k_max);
        b.lower = b.lower.min(r.partial);
        b.upper = b.upper.max(r.partial + r.tail_bound);
        b.min_estimate = b.min_estimate.min(r.value);
        b.max_estimate = b.max_estimate.max(r.value);
    }
    b
}

/// Relative residual of `|E_z| = |E_{Re z}| e^{-Im z Arg Omega}` on a grid.
pub fn check_spectrum_modulus(spec: &SplineSpec, omega_grid: &[f64]) -> BoundCheckResult {
    let z = spec.z();
    let v = max_violation(omega_grid.iter().map(|&om| {
        let om_sym = omega_unchecked(om, spec.a());
        let lhs = spline_symbol(z, om, spec.a()).norm();
        let rhs = spline_symbol(Complex64::new(z.re, 0.0), om, spec.a()).norm() * (-z.im * om_sym.arg()).exp();
        (lhs - rhs).abs() / lhs.max(1e-300)
    }));
    BoundCheckResult::new("spectrum modulus", omega_grid.len(), v, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(re: f64, im: f64, a: f64) -> SplineSpec {
        SplineSpec::new(Complex64::new(re, im), a).unwrap()
    }

    #[test]
    fn lemma_examples() {
        let r = check_cos_cosh_lemma(&[0.0, PI, -PI, 1e-9, 50.0]);
        assert!(r.passed && r.max_violation == 0.0);
        assert!((2.0 * (PI / 2.0).sin().powi(2) / (PI * PI) - 2.0 / (PI * PI)).abs() < 1e-16);
    }

    #[test]
    fn result_json_line_shape() {
        let r = BoundCheckResult::new("x", 3, 0.0, 1e-12);
        assert_eq!(r.to_json_line(), r#"{"name":"x","grid_size":3,"max_violation":0.0,"passed":true}"#);
    }

    #[test]
    fn sandwich_on_example_grids() {
        let grid = linear_grid(-100.0, 100.0, 20_001);
        for a in [1.0, 10.0] {
            assert!(check_omega_sandwich(a, &grid).unwrap().passed);
        }
        assert!(check_omega_sandwich(0.0, &grid).is_err());
        for s in [spec(2.5, 1.0, 1.0), spec(1.1, 3.0, 0.1)] {
            assert!(check_spline_sandwich(&s, &grid).unwrap().passed);
        }
    }

    #[test]
    fn circle_examples() {
        assert!(circle_identity_residual(1.0, 2.0).unwrap() < 1e-13);
        let grid = linear_grid(-50.0, 50.0, 4001);
        let c = check_circle_asymptotics(&[10.0, 20.0, 30.0], &grid).unwrap();
        assert!(c.identity.passed);
        let d20 = &c.deviations[1];
        assert!(d20.max_deviation <= 10.0 * (-20f64).exp() / 400.0);
        assert!(c.summary.passed, "{:?}", c.ratio_factors);
    }

    #[test]
    fn riesz_hat_values() {
        let hat = spec(2.0, 0.0, 0.0);
        let r0 = riesz_sum(&hat, 0.0, RIESZ_K_MAX);
        assert!((r0.value - 1.0).abs() < 1e-15 && r0.tail_bound == 0.0);
        // sum over odd n of 16/(pi n)^4 = 1/3.
        let r = riesz_sum(&hat, PI, RIESZ_K_MAX);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-13, "{}", r.value);
        assert!(r.partial <= 1.0 / 3.0 && 1.0 / 3.0 <= r.partial + r.tail_bound);
        let brute: f64 = (-1_000_000i64..1_000_000)
            .map(|k| 16.0 / (PI * (2 * k + 1) as f64).powi(4))
            .sum();
        assert!((brute - 1.0 / 3.0).abs() < 1e-13, "{brute}");
    }

    #[test]
    fn riesz_tail_matches_long_sum() {
        for s in [spec(1.2, 1.0, 0.5), spec(2.5, -1.0, 0.0), spec(1.2, 0.0, 3.0)] {
            for om in [0.3, 2.0, -3.0] {
                let long = riesz_sum(&s, om, 20_000);
                let short = riesz_sum(&s, om, RIESZ_K_MAX);
                let rel = (long.value - short.value).abs() / long.value;
                assert!(rel < 1e-11, "{rel}");
                assert!(short.partial + short.tail_bound >= long.partial);
            }
        }
    }

    #[test]
    fn riesz_positive() {
        let b = riesz_bounds(&spec(2.5, 1.0, 1.0), 256, RIESZ_K_MAX);
        assert!(b.lower > 0.0 && b.upper < f64::INFINITY && b.lower <= b.upper);
    }

    #[test]
    fn spectrum_modulus_identity() {
        let grid = linear_grid(-60.0, 60.0, 5001);
        for s in [spec(2.5, 1.0, 1.0), spec(1.2, -1.0, 0.0), spec(4.0, 1.0, 3.0)] {
            let r = check_spectrum_modulus(&s, &grid);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn random_grid_is_reproducible() {
        assert_eq!(random_grid(-1.0, 1.0, 10, 7), random_grid(-1.0, 1.0, 10, 7));
        assert!(random_grid(-50.0, 50.0, 1000, 1).iter().all(|x| (-50.0..=50.0).contains(x)));
    }

    proptest! {
        #[test]
        fn riesz_is_periodic(om in -20.0f64..20.0, zr in 1.2f64..4.0, zi in -1.0f64..1.0, a in 0.0f64..3.0) {
            let s = spec(zr, zi, a);
            let r1 = riesz_sum(&s, om, RIESZ_K_MAX).value;
            let r2 = riesz_sum(&s, om + 2.0 * PI, RIESZ_K_MAX).value;
            prop_assert!((r1 - r2).abs() < 1e-10);
        }

        #[test]
        fn lemma_holds_anywhere(x in -50.0f64..50.0) {
            prop_assert!(check_cos_cosh_lemma(&[x]).passed);
        }
    }
}
