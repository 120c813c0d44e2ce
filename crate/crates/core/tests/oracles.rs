use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use expspline::bivariate::BivariateSpec;
use expspline::oracle::{convolve_oracle, indicator_samples};
use expspline::suites::{bivariate_study, classical_reduction};
use expspline::{evaluate_time, fourier_transform, sample, SplineSpec};
use num_complex::Complex64;
use rustfft::FftPlanner;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Samples `x_k = k P / N` of the inverse transform of `spectrum`, computed
/// from `N` symbol samples on the frequency grid `2 pi j / P`.
fn dense_inverse(spectrum: impl Fn(f64) -> Complex64, period: f64, n: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..n)
        .map(|k| {
            let j = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            spectrum(2.0 * PI * j / period)
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|v| v / period).collect()
}

#[test]
fn time_series_matches_dense_inverse_transform() {
    let spec = SplineSpec::new(c(2.0, 0.5), 1.0).unwrap();
    let period = 64.0;
    let n = 1usize << 20;
    let fine = dense_inverse(|w| fourier_transform(&spec, w), period, n);
    let coarse = dense_inverse(|w| fourier_transform(&spec, w), period, n / 2);
    // At the knots the truncated series converges like N^{1-z}; one
    // Richardson step with that exponent removes the leading term.
    let gain = Complex64::new(2.0, 0.0).powc(spec.z() - 1.0);
    let mut worst = 0.0f64;
    for k in (0..(12 * n / 64)).step_by(n / 1024) {
        let x = k as f64 * period / n as f64;
        let oracle = (gain * fine[k] - coarse[k / 2]) / (gain - 1.0);
        worst = worst.max((oracle - evaluate_time(&spec, x)).norm());
    }
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn indicator_powers_converge_at_second_order() {
    for n in [3usize, 4] {
        let e1 = classical_reduction(n, 1.0 / 64.0).unwrap();
        let e2 = classical_reduction(n, 1.0 / 128.0).unwrap();
        let e3 = classical_reduction(n, 1.0 / 256.0).unwrap();
        assert!(e3 <= (1.0f64 / 256.0).powi(2), "n={n}: {e3:e}");
        for r in [e1 / e2, e2 / e3] {
            assert!((3.5..4.5).contains(&r), "n={n}: ratio {r}");
        }
    }
    assert_eq!(classical_reduction(2, 1.0 / 32.0).unwrap(), 0.0);
}

#[test]
fn hat_convolved_with_indicator_is_quadratic_spline() {
    let dx = 1.0 / 128.0;
    let chi = indicator_samples(dx).unwrap();
    let b3 = convolve_oracle(&convolve_oracle(&chi, &chi).unwrap(), &chi).unwrap();
    let spec = SplineSpec::new(c(3.0, 0.0), 0.0).unwrap();
    let want = sample(&spec, b3.x0(), dx, b3.len()).unwrap();
    let mass: f64 = b3.values().iter().map(|v| v.re).sum::<f64>() * dx;
    assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
    for (a, b) in b3.values().iter().zip(want.values()) {
        assert!((a - b).norm() < dx * dx);
    }
}

#[test]
fn bivariate_spline_matches_its_transform() {
    for s in [
        BivariateSpec::new(c(2.0, 0.5), c(1.5, 0.0), 1.0, 0.3).unwrap(),
        BivariateSpec::new(c(2.5, -1.0), c(2.0, 1.0), 0.5, 2.0).unwrap(),
    ] {
        let r = bivariate_study(&s).unwrap();
        assert!(r.dft_error < 1e-4, "{r:?}");
        assert!(r.mass_error < 1e-4, "{r:?}");
        assert!(r.forms_agreement < 1e-10, "{r:?}");
        assert!(r.convolution_error < 1e-4, "{r:?}");
    }
}
