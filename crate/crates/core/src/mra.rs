//! Two-scale structure: scale symbol, low-pass filter, refinement checks,
//! the associated wavelet and its orthonormalization.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::BoundCheckResult;
use crate::error::{Error, Result};
use crate::oracle::gauss_legendre;
use crate::special::{binomial, binomial_tail_bound, cpow, fmt_complex};
use crate::spline::{fourier_transform, SplineSpec, TimeSeries};

/// `((1 + e^{-(a + i omega)}) / 2)^z`, linking `E_z^{2a}(2 omega)` to `E_z^a(omega)`.
pub fn scale_symbol(spec: &SplineSpec, omega: f64) -> Complex64 {
    scale_symbol_raw(spec.z(), spec.a(), omega)
}

fn scale_symbol_raw(z: Complex64, a: f64, omega: f64) -> Complex64 {
    let base = (1.0 + Complex64::new(-a, -omega).exp()) / 2.0;
    cpow(base, z)
}

/// Truncated coefficient sequence of the scale symbol,
/// `weights[k] = 2^{-z} binom(z, k) e^{-ak}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterCoefficients {
    pub z: Complex64,
    pub a: f64,
    pub weights: Vec<Complex64>,
    pub tail_bound: f64,
}

impl FilterCoefficients {
    /// `sum_k weights[k] e^{-i omega k}`.
    pub fn symbol(&self, omega: f64) -> Complex64 {
        let e = Complex64::new(0.0, -omega).exp();
        self.weights.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, w| acc * e + w)
    }

    /// `sum_k weights[k]`.
    pub fn mass(&self) -> Complex64 {
        self.weights.iter().sum()
    }

    /// Low-pass filter `H0 = symbol / 2`.
    pub fn lowpass(&self, omega: f64) -> Complex64 {
        self.symbol(omega) / 2.0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Hard cap on the number of filter taps.
pub const MAX_FILTER_TAPS: usize = 1 << 20;

/// Builds the filter, truncated once
/// `sum_{k > L} |binom(z, k)| e^{-ak} < tol 2^{Re z}` is certified.
pub fn lowpass_filter(spec: &SplineSpec, tol: f64) -> Result<FilterCoefficients> {
    if !(tol > 0.0) {
        return Err(Error::Usage(format!("filter tolerance must be positive (got {tol})")));
    }
    let z = spec.z();
    let a = spec.a();
    let target = tol * 2f64.powf(z.re);
    let mut l = 1usize;
    while binomial_tail_bound(z, l, a) >= target {
        l *= 2;
        if l > MAX_FILTER_TAPS {
            return Err(Error::NonConvergence {
                function: "lowpass_filter",
                terms: MAX_FILTER_TAPS,
                last_term: binomial(z, MAX_FILTER_TAPS).norm(),
            });
        }
    }
    // Bisect down to the smallest certified length.
    let (mut lo, mut hi) = (l / 2, l);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if binomial_tail_bound(z, mid, a) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let l = if binomial_tail_bound(z, lo.max(1), a) < target { lo.max(1) } else { hi };
    Ok(filter_with_taps(spec, l))
}

/// The first `l + 1` filter weights with their certified tail bound.
pub fn filter_with_taps(spec: &SplineSpec, l: usize) -> FilterCoefficients {
    let z = spec.z();
    let a = spec.a();
    let scale = cpow(Complex64::new(2.0, 0.0), -z);
    let mut weights = Vec::with_capacity(l + 1);
    let mut b = Complex64::new(1.0, 0.0);
    for k in 0..=l {
        if k > 0 {
            b = b * (z - (k - 1) as f64) / k as f64;
        }
        weights.push(scale * b * (-a * k as f64).exp());
    }
    let tail_bound = scale.norm() * binomial_tail_bound(z, l, a);
    FilterCoefficients { z, a, weights, tail_bound }
}

/// Refined value `2 sum_k weights[k] E_z^a(2x - k)`, which equals
/// `E_z^{2a}(x)`. Terms with `k >= 2x` vanish, so the sum is finite.
pub fn two_scale_rhs(series: &TimeSeries, filter: &FilterCoefficients, x: f64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (k, w) in filter.weights.iter().enumerate() {
        let t = 2.0 * x - k as f64;
        if t <= 0.0 {
            break;
        }
        s += w * series.eval(t);
    }
    s * 2.0
}

/// Uniform abscissae `x0 + k dx`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.x0 + k as f64 * self.dx)
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.n.saturating_sub(1) as f64 * self.dx
    }
}

/// Compares `E_z^{2a}(x)` with the filtered sum over `E_z^a(2x - k)`.
///
/// Passes when the error is below `tol + 2 tail_bound max|E_z^a|`. The
/// filter keeps every tap with `k < 2 x_max`; later taps multiply
/// `E_z^a(2x - k) = 0`, so the certified tail vanishes on the grid.
pub fn check_two_scale(spec: &SplineSpec, grid: &Grid, tol: f64) -> Result<BoundCheckResult> {
    let coarse = spec.with_decay(2.0 * spec.a())?;
    let x_max = grid.x_max().max(0.0);
    let taps = (2.0 * x_max).ceil() as usize + 1;
    let filter = filter_with_taps(spec, taps);
    let fine = TimeSeries::new(spec, 2.0 * x_max);
    let lhs_series = TimeSeries::new(&coarse, x_max);
    let mut err = 0.0f64;
    for x in grid.points() {
        let lhs = lhs_series.eval(x);
        let rhs = two_scale_rhs(&fine, &filter, x);
        err = err.max((lhs - rhs).norm());
    }
    Ok(BoundCheckResult::new(
        format!("two-scale z={} a={}", fmt_complex(spec.z()), spec.a()),
        grid.n,
        err,
        tol,
    ))
}

/// Frequency of the autocorrelation periodization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Periodization {
    /// `R(omega) = sum_k |theta(omega + k)|^2`.
    #[default]
    Unit,
    /// `R(omega) = sum_k |theta(omega + 2 pi k)|^2`.
    TwoPi,
}

impl Periodization {
    pub fn period(&self) -> f64 {
        match self {
            Periodization::Unit => 1.0,
            Periodization::TwoPi => 2.0 * PI,
        }
    }
}

/// A scaling function, its filter and the periodization convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub base: SplineSpec,
    pub filter: FilterCoefficients,
    #[serde(default)]
    pub periodization: Periodization,
}

/// Degeneracy threshold of the autocorrelation.
pub const AUTOCORRELATION_FLOOR: f64 = 1e-10;

impl WaveletSpec {
    pub fn new(base: SplineSpec) -> Result<Self> {
        Ok(Self { base, filter: lowpass_filter(&base, 1e-14)?, periodization: Periodization::Unit })
    }

    pub fn with_periodization(mut self, p: Periodization) -> Self {
        self.periodization = p;
        self
    }

    /// Rigorous bound on `sum_{|k| > k_max} |theta(omega + P k)|^2` for reduced `omega`.
    pub fn tail_bound(&self, k_max: usize) -> f64 {
        let z = self.base.z();
        let (x, y) = (z.re, z.im);
        let p = self.periodization.period();
        let k = k_max.max(1) as f64;
        // |theta(nu)|^2 <= e^{3 pi |y|} (4/|nu|)^{2x} and |omega + P k| >= P(|k| - 1/2).
        2.0 * (3.0 * PI * y.abs()).exp() * 4f64.powf(2.0 * x) * p.powf(-2.0 * x) * (k - 0.5).powf(1.0 - 2.0 * x)
            / (2.0 * x - 1.0)
    }

    /// Smallest `k_max` whose tail bound is below `target`, capped at 10^6.
    pub fn k_max_for(&self, target: f64) -> usize {
        let mut k = 16usize;
        while self.tail_bound(k) > target && k < 1_000_000 {
            k = k * 5 / 4 + 1;
        }
        k
    }
}

/// `theta(2 omega) = e^{-i omega} conj(G(omega + pi)) E_z^a(omega)` with
/// `G = scale_symbol`, evaluated at `nu = 2 omega`.
pub fn mother_wavelet_symbol(w: &WaveletSpec, nu: f64) -> Complex64 {
    let om = nu / 2.0;
    let g = scale_symbol_raw(w.base.z(), w.base.a(), om + PI).conj();
    Complex64::new(0.0, -om).exp() * g * fourier_transform(&w.base, om)
}

/// Truncated autocorrelation with a rigorous tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Autocorrelation {
    pub value: f64,
    pub tail_bound: f64,
}

/// `R(omega) = sum_{|k| <= k_max} |theta(omega + P k)|^2`, `P` the period.
pub fn autocorrelation(w: &WaveletSpec, omega: f64, k_max: usize) -> Autocorrelation {
    let p = w.periodization.period();
    let om = omega - p * (omega / p).round();
    let k = k_max as i64;
    let value = (-k..=k)
        .map(|j| mother_wavelet_symbol(w, om + p * j as f64).norm_sqr())
        .sum();
    Autocorrelation { value, tail_bound: w.tail_bound(k_max) }
}

/// Default autocorrelation accuracy target.
pub const AUTOCORRELATION_TAIL: f64 = 1e-11;

/// `theta(omega) / sqrt(R(omega))`.
pub fn orthonormalized_wavelet_symbol(w: &WaveletSpec, omega: f64) -> Result<Complex64> {
    let r = autocorrelation(w, omega, w.k_max_for(AUTOCORRELATION_TAIL));
    normalize(mother_wavelet_symbol(w, omega), r.value, omega)
}

fn normalize(theta: Complex64, r: f64, omega: f64) -> Result<Complex64> {
    if !(r > AUTOCORRELATION_FLOOR) {
        return Err(Error::Degenerate { omega, value: r, threshold: AUTOCORRELATION_FLOOR });
    }
    Ok(theta / r.sqrt())
}

/// Inner products `(1/P) int |psi(nu)|^2 e^{2 pi i k nu / P} d nu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orthonormality {
    pub shifts: Vec<i64>,
    pub inner_products: Vec<Complex64>,
    /// `max_k |<psi, T_k psi> - delta_k0|`.
    pub max_error: f64,
    /// Bound on the mass of `|psi|^2` outside the quadrature window.
    pub window_tail: f64,
    pub nodes: usize,
}

/// Gauss-Legendre quadrature of the shifted inner products on
/// `[-window, window]`, panels aligned with the period so the autocorrelation
/// is evaluated once per distinct residue.
pub fn wavelet_orthonormality(w: &WaveletSpec, shifts: &[i64], window_periods: usize) -> Result<Orthonormality> {
    const PANELS_PER_PERIOD: usize = 4;
    const NODES: usize = 8;
    let p = w.periodization.period();
    let (gx, gw) = gauss_legendre(NODES);
    let h = p / PANELS_PER_PERIOD as f64;
    let k_max = w.k_max_for(AUTOCORRELATION_TAIL);
    // Residues r in [0, P) indexed by (panel, node).
    let mut r_vals = Vec::with_capacity(PANELS_PER_PERIOD * NODES);
    for panel in 0..PANELS_PER_PERIOD {
        for &t in &gx {
            let om = (panel as f64 + 0.5 + 0.5 * t) * h;
            r_vals.push(autocorrelation(w, om, k_max).value);
        }
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); shifts.len()];
    let n_periods = window_periods as i64;
    let mut nodes = 0usize;
    for period in -n_periods..n_periods {
        for panel in 0..PANELS_PER_PERIOD {
            for (j, (&t, &wt)) in gx.iter().zip(&gw).enumerate() {
                let local = (panel as f64 + 0.5 + 0.5 * t) * h;
                let nu = period as f64 * p + local;
                let r = r_vals[panel * NODES + j];
                let psi = normalize(mother_wavelet_symbol(w, nu), r, nu)?;
                let dens = psi.norm_sqr() * wt * h / 2.0;
                for (a, &k) in acc.iter_mut().zip(shifts) {
                    let ph = 2.0 * PI * k as f64 * local / p;
                    *a += dens * Complex64::new(ph.cos(), ph.sin());
                }
                nodes += 1;
            }
        }
    }
    let inner: Vec<Complex64> = acc.into_iter().map(|a| a / p).collect();
    let max_error = inner
        .iter()
        .zip(shifts)
        .map(|(v, &k)| (v - if k == 0 { 1.0 } else { 0.0 }).norm())
        .fold(0.0, f64::max);
    let z = w.base.z();
    let big_w = n_periods as f64 * p;
    let r_min = r_vals.iter().copied().fold(f64::INFINITY, f64::min);
    let window_tail = 2.0 * (3.0 * PI * z.im.abs()).exp() * 16f64.powf(z.re) * big_w.powf(1.0 - 2.0 * z.re)
        / ((2.0 * z.re - 1.0) * r_min * p);
    Ok(Orthonormality { shifts: shifts.to_vec(), inner_products: inner, max_error, window_tail, nodes })
}
