//! Exponential difference operators of complex order and fractional
//! derivatives realized as Fourier multipliers.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::analysis::BoundCheckResult;
use crate::error::{Error, Result};
use crate::oracle::unit_steps;
use crate::sampled::SampledFunction;
use crate::special::{binomial_table, binomial_tail_bound, cpow, fmt_complex, gamma, truncated_power, ComplexOrder};
use crate::spline::{check_decay, fourier_transform, SplineSpec};

/// Coefficients `c_l = binom(z, l) (-1)^l e^{-la}` of a delta train
/// `sum_l c_l delta(x - l)`, `l = 0..=L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaTrain {
    pub z: Complex64,
    pub a: f64,
    pub coefficients: Vec<Complex64>,
    pub tail_bound: f64,
}

impl DeltaTrain {
    pub fn new(z: ComplexOrder, a: f64, terms: usize) -> Result<Self> {
        check_decay(a)?;
        let z = z.value();
        let coefficients = binomial_table(z, terms)
            .into_iter()
            .enumerate()
            .map(|(l, b)| {
                let s = if l % 2 == 0 { b } else { -b };
                s * (-a * l as f64).exp()
            })
            .collect();
        Ok(Self { z, a, coefficients, tail_bound: binomial_tail_bound(z, terms, a) })
    }

    /// Fourier transform `sum_l c_l e^{-i omega l}`.
    pub fn symbol(&self, omega: f64) -> Complex64 {
        let e = Complex64::new(0.0, -omega).exp();
        self.coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * e + c)
    }

    pub fn coefficient_sum(&self) -> Complex64 {
        self.coefficients.iter().sum()
    }

    /// `|sum_l c_l| / e^{|z - 1|}`: the constant in `|sum c_l| <= c e^{|z-1|}`.
    pub fn sum_constant(&self) -> f64 {
        self.coefficient_sum().norm() / (self.z - 1.0).norm().exp()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// `sum_{l=0}^{L} binom(z,l) (-1)^l e^{-la} f(x - l)` on the grid of `f`,
/// with `f` extended by zero to the left.
pub fn exp_difference(z: ComplexOrder, a: f64, f: &SampledFunction, terms: usize) -> Result<SampledFunction> {
    let p = unit_steps(f.dx())?;
    let train = DeltaTrain::new(z, a, terms)?;
    let v = f.values();
    let out = (0..v.len())
        .map(|k| {
            train
                .coefficients
                .iter()
                .enumerate()
                .take_while(|(l, _)| l * p <= k)
                .map(|(l, c)| c * v[k - l * p])
                .sum()
        })
        .collect();
    SampledFunction::new(f.x0(), f.dx(), out)
}

/// Fourier multiplier `(a + i omega)^z` of `(D + aI)^z`, principal branch.
///
/// At `a = omega = 0` the value is 0 for `Re z > 0` and 1 for `z = 0`.
pub fn fractional_derivative_symbol(z: Complex64, a: f64, omega: f64) -> Result<Complex64> {
    check_decay(a)?;
    if a == 0.0 && omega == 0.0 {
        if z.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if z == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(1.0, 0.0));
        }
        return Err(Error::Domain(format!(
            "multiplier (a + i omega)^z is singular at a = omega = 0 for z = {}",
            fmt_complex(z)
        )));
    }
    Ok(cpow(Complex64::new(a, omega), z))
}

/// Largest allowed modulus at the right edge of the input of [`apply_fractional`].
pub const EDGE_DECAY: f64 = 1e-8;

/// Applies `(D + aI)^z` to sampled data through the DFT on a grid padded to
/// four times its length.
pub fn apply_fractional(z: Complex64, a: f64, f: &SampledFunction) -> Result<SampledFunction> {
    check_decay(a)?;
    let edge = f.values()[f.len() - 1].norm();
    if !(edge <= EDGE_DECAY) {
        return Err(Error::Usage(format!(
            "input has not decayed at its right edge: |f| = {edge:e} > {EDGE_DECAY:e}"
        )));
    }
    let n = 4 * f.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[..f.len()].copy_from_slice(f.values());
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let period = n as f64 * f.dx();
    for (j, b) in buf.iter_mut().enumerate() {
        let js = if j > n / 2 { j as f64 - n as f64 } else { j as f64 };
        *b *= fractional_derivative_symbol(z, a, 2.0 * PI * js / period)?;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let out = buf[..f.len()].iter().map(|v| v * scale).collect();
    SampledFunction::new(f.x0(), f.dx(), out)
}

/// Residual of `(a + i omega)^z E_z^a(omega) = sum_{l <= L} c_l e^{-i omega l}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaIdentity {
    pub check: BoundCheckResult,
    pub tail_bound: f64,
    pub coefficient_sum: Complex64,
    pub sum_constant: f64,
}

/// Fourier-domain check of `(D + aI)^z E_z^a = sum_l c_l delta(x - l)`.
/// Passes when the residual stays below `tol + tail_bound`.
pub fn verify_delta_identity(spec: &SplineSpec, terms: usize, omega_grid: &[f64], tol: f64) -> Result<DeltaIdentity> {
    let train = DeltaTrain::new(spec.order(), spec.a(), terms)?;
    let z = spec.z();
    let mut worst = 0.0f64;
    for &om in omega_grid {
        let lhs = fractional_derivative_symbol(z, spec.a(), om)? * fourier_transform(spec, om);
        worst = worst.max((lhs - train.symbol(om)).norm());
    }
    let check = BoundCheckResult::new(
        format!("delta identity z={} a={}", fmt_complex(z), spec.a()),
        omega_grid.len(),
        worst,
        tol + train.tail_bound,
    );
    Ok(DeltaIdentity {
        check,
        tail_bound: train.tail_bound,
        coefficient_sum: train.coefficient_sum(),
        sum_constant: train.sum_constant(),
    })
}

/// Riemann-Liouville kernel `x_+^{z-1} / Gamma(z)`.
pub fn kernel_kz(z: ComplexOrder, x: f64) -> Complex64 {
    let z = z.value();
    truncated_power(x, z - 1.0) / gamma(z).expect("Re z > 0 keeps gamma finite")
}
