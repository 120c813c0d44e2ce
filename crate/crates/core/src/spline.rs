//! Complex exponential B-splines: the Fourier symbol and the time-domain series.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampled::SampledFunction;
use crate::special::{binomial_table, cpow, gamma, truncated_power, ComplexOrder};

/// Order `z` (with `Re z > 1`) and decay `a >= 0` of one spline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct SplineSpec {
    z: ComplexOrder,
    a: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    z: Complex64,
    a: f64,
}

impl TryFrom<RawSpec> for SplineSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        SplineSpec::new(r.z, r.a)
    }
}

impl SplineSpec {
    pub fn new(z: Complex64, a: f64) -> Result<Self> {
        let z = ComplexOrder::new(z)?;
        check_decay(a)?;
        Ok(Self { z, a })
    }

    pub fn from_order(z: ComplexOrder, a: f64) -> Result<Self> {
        check_decay(a)?;
        Ok(Self { z, a })
    }

    pub fn z(&self) -> Complex64 {
        self.z.value()
    }

    pub fn order(&self) -> ComplexOrder {
        self.z
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Same order with the decay parameter replaced.
    pub fn with_decay(&self, a: f64) -> Result<Self> {
        Self::from_order(self.z, a)
    }
}

pub(crate) fn check_decay(a: f64) -> Result<()> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::Domain(format!("decay parameter a = {a} must satisfy a >= 0")));
    }
    Ok(())
}

/// `(1 - e^{-w}) / w` for `w = a + i omega`, without validation.
pub(crate) fn omega_unchecked(omega: f64, a: f64) -> Complex64 {
    let w = Complex64::new(a, omega);
    if w.norm() < 1e-4 {
        // sum_{n>=0} (-w)^n / (n+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..10 {
            term = term * (-w) / (n + 1) as f64;
            sum += term;
        }
        return sum;
    }
    numerator(omega, a) / w
}

/// `1 - e^{-(a + i omega)}` with the real part in cancellation-free form.
pub(crate) fn numerator(omega: f64, a: f64) -> Complex64 {
    let ea = (-a).exp();
    let s = (omega / 2.0).sin();
    Complex64::new(-(-a).exp_m1() + 2.0 * ea * s * s, ea * omega.sin())
}

/// The elementary symbol `(1 - e^{-(a + i omega)}) / (a + i omega)`.
///
/// The removable singularity at `a = omega = 0` takes the value 1.
pub fn omega_symbol(omega: f64, a: f64) -> Result<Complex64> {
    check_decay(a)?;
    Ok(omega_unchecked(omega, a))
}

/// Real and imaginary parts of [`omega_symbol`] from their closed forms.
pub fn omega_real_imag(omega: f64, a: f64) -> Result<(f64, f64)> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::Domain(format!("real/imaginary split needs a > 0 (got {a})")));
    }
    let ea = (-a).exp();
    let (s, c) = omega.sin_cos();
    let d = a * a + omega * omega;
    let f = (ea * omega * s - ea * a * c + a) / d;
    let g = (a * ea * s + ea * omega * c - omega) / d;
    Ok((f, g))
}

/// Margin kept between `Arg Omega` and the negative real axis.
const BRANCH_MARGIN: f64 = 1e-9;
/// Below this modulus the margin is not enforced: for `a = 0` the curve
/// reaches the origin tangentially to the negative axis at `omega = 2 pi k`.
const BRANCH_CHECK_MODULUS: f64 = 1e-6;

pub(crate) fn spline_symbol(z: Complex64, omega: f64, a: f64) -> Complex64 {
    let om = omega_unchecked(omega, a);
    if om.re == 0.0 && om.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    assert!(
        om.norm() < BRANCH_CHECK_MODULUS || om.arg().abs() < PI - BRANCH_MARGIN,
        "Omega({omega}, {a}) = {om} reached the branch cut"
    );
    cpow(om, z)
}

/// The spline symbol `Omega(omega, a)^z` on the principal branch.
pub fn fourier_transform(spec: &SplineSpec, omega: f64) -> Complex64 {
    spline_symbol(spec.z(), omega, spec.a)
}

/// Number of series terms needed on `[0, x_max]` and the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPlan {
    pub terms: usize,
    pub tail_bound: f64,
}

/// Plans the truncation of the time series on `[0, x_max]`.
///
/// Each term is supported on `[l, inf)`, so keeping the terms `l <= x_max` is
/// exact and the tail bound is zero.
pub fn plan_truncation(_spec: &SplineSpec, x_max: f64, tol: f64) -> Result<TruncationPlan> {
    if !(tol > 0.0) {
        return Err(Error::Usage(format!("tolerance must be positive (got {tol})")));
    }
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::Usage(format!("x_max must be positive and finite (got {x_max})")));
    }
    Ok(TruncationPlan {
        terms: x_max.floor() as usize + 1,
        tail_bound: 0.0,
    })
}

/// Reusable evaluator of the time-domain series for one spec.
///
/// `E(x) = 1/Gamma(z) sum_l binom(z,l) (-1)^l e^{-la} e^{-a(x-l)} (x-l)_+^{z-1}`.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    spec: SplineSpec,
    inv_gamma: Complex64,
    coeffs: Vec<Complex64>,
}

impl TimeSeries {
    /// Evaluator covering `x <= x_max`.
    pub fn new(spec: &SplineSpec, x_max: f64) -> Self {
        let z = spec.z();
        let inv_gamma = 1.0 / gamma(z).expect("Re z > 1 keeps gamma away from its poles");
        let terms = if x_max > 0.0 { x_max.floor() as usize + 1 } else { 1 };
        let coeffs = binomial_table(z, terms)
            .into_iter()
            .enumerate()
            .map(|(l, b)| if l % 2 == 0 { b } else { -b })
            .collect();
        Self { spec: *spec, inv_gamma, coeffs }
    }

    pub fn spec(&self) -> &SplineSpec {
        &self.spec
    }

    /// Evaluates the series keeping at most `terms` terms.
    pub fn eval_terms(&self, x: f64, terms: usize) -> Complex64 {
        if x <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let needed = x.ceil() as usize;
        if terms > self.coeffs.len() && self.coeffs.len() < needed {
            return TimeSeries::new(&self.spec, x).eval_terms(x, terms);
        }
        let zm1 = self.spec.z() - 1.0;
        let decay = (-self.spec.a * x).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        for (l, c) in self.coeffs.iter().enumerate().take(terms) {
            let t = x - l as f64;
            if t <= 0.0 {
                break;
            }
            sum += c * truncated_power(t, zm1);
        }
        // e^{-la} e^{-a(x-l)} = e^{-ax} for every term.
        sum * decay * self.inv_gamma
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_terms(x, usize::MAX)
    }
}

/// Time-domain value `E_z^a(x)`; zero for `x <= 0`.
pub fn evaluate_time(spec: &SplineSpec, x: f64) -> Complex64 {
    TimeSeries::new(spec, x).eval(x)
}

/// Time-domain value using only the first `terms` series terms.
pub fn evaluate_time_truncated(spec: &SplineSpec, x: f64, terms: usize) -> Complex64 {
    TimeSeries::new(spec, x).eval_terms(x, terms)
}

/// Samples `E_z^a` at `x0 + k dx` for `k = 0..n`.
pub fn sample(spec: &SplineSpec, x0: f64, dx: f64, n: usize) -> Result<SampledFunction> {
    if !(dx > 0.0) || !dx.is_finite() {
        return Err(Error::Usage(format!("grid step must be positive (got {dx})")));
    }
    if n == 0 {
        return Err(Error::Usage("sample count must be at least 1".into()));
    }
    let x_max = x0 + (n - 1) as f64 * dx;
    let series = TimeSeries::new(spec, x_max);
    let values = (0..n).map(|k| series.eval(x0 + k as f64 * dx)).collect();
    SampledFunction::new(x0, dx, values)
}
