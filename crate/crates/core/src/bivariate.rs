//! Two-parameter splines `E_z^a * E_zeta^b`: Fourier product and the closed
//! time-domain forms built on Kummer's function and a terminating Gauss series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{
    binomial_table, cpow, gamma, gauss_2f1_terminating, kummer_m, truncated_power, ComplexOrder,
};
use crate::spline::{check_decay, evaluate_time, spline_symbol, SplineSpec};

/// Orders `z, zeta` (both `Re > 1`) with decays `a, b >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBivariate")]
pub struct BivariateSpec {
    z: ComplexOrder,
    zeta: ComplexOrder,
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawBivariate {
    z: Complex64,
    zeta: Complex64,
    a: f64,
    b: f64,
}

impl TryFrom<RawBivariate> for BivariateSpec {
    type Error = Error;
    fn try_from(r: RawBivariate) -> Result<Self> {
        BivariateSpec::new(r.z, r.zeta, r.a, r.b)
    }
}

impl BivariateSpec {
    pub fn new(z: Complex64, zeta: Complex64, a: f64, b: f64) -> Result<Self> {
        let z = ComplexOrder::new(z)?;
        let zeta = ComplexOrder::new(zeta)?;
        check_decay(a)?;
        check_decay(b)?;
        Ok(Self { z, zeta, a, b })
    }

    pub fn z(&self) -> Complex64 {
        self.z.value()
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta.value()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The two univariate factors.
    pub fn factors(&self) -> (SplineSpec, SplineSpec) {
        (
            SplineSpec::from_order(self.z, self.a).expect("validated"),
            SplineSpec::from_order(self.zeta, self.b).expect("validated"),
        )
    }

    /// Parameters swapped: `(zeta, z; b, a)`.
    pub fn swapped(&self) -> Self {
        Self { z: self.zeta, zeta: self.z, a: self.b, b: self.a }
    }
}

/// `Omega(omega, a)^z Omega(omega, b)^zeta`.
pub fn bivariate_fourier(spec: &BivariateSpec, omega: f64) -> Complex64 {
    spline_symbol(spec.z(), omega, spec.a) * spline_symbol(spec.zeta(), omega, spec.b)
}

/// Fourier symbol of the convolution of any number of splines.
pub fn product_fourier(factors: &[SplineSpec], omega: f64) -> Complex64 {
    factors
        .iter()
        .map(|s| spline_symbol(s.z(), omega, s.a()))
        .product()
}

/// How the inner bracket of the closed form was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketForm {
    DoubleBinomial,
    Gauss,
    /// The Gauss form hit a Pochhammer zero and fell back to the double sum.
    GaussFallback,
}

/// A bivariate value with the bracket form used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariateValue {
    pub value: Complex64,
    pub form: BracketForm,
}

fn check_terms(x: f64, terms: usize) -> Result<()> {
    if x > 0.0 && (terms as f64) < x.ceil() {
        return Err(Error::Usage(format!("need at least ceil(x) = {} terms, got {terms}", x.ceil())));
    }
    Ok(())
}

/// `sum_{l=0}^{k} binom(z,l) binom(zeta,k-l) e^{-l(a-b)}`.
fn double_binomial_bracket(bz: &[Complex64], bq: &[Complex64], t: f64, k: usize) -> Complex64 {
    (0..=k).map(|l| bz[l] * bq[k - l] * t.powi(l as i32)).sum()
}

/// Closed form
/// `1/Gamma(z+zeta) sum_k B_k (-1)^k e^{-bx} M(z, z+zeta; -(a-b)(x-k)) (x-k)_+^{z+zeta-1}`
/// with `B_k` computed from `bracket`.
fn closed_form(
    spec: &BivariateSpec,
    x: f64,
    terms: usize,
    mut bracket: impl FnMut(usize) -> Result<Complex64>,
) -> Result<Complex64> {
    check_terms(x, terms)?;
    if x <= 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (z, zeta) = (spec.z(), spec.zeta());
    let s = z + zeta;
    let d = spec.a - spec.b;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=terms {
        let t = x - k as f64;
        if t <= 0.0 {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let m = kummer_m(z, s, Complex64::new(-d * t, 0.0))?;
        sum += bracket(k)? * sign * m * truncated_power(t, s - 1.0);
    }
    Ok(sum * (-spec.b * x).exp() / gamma(s)?)
}

/// Time-domain value from the Kummer closed form with the double-binomial
/// bracket. Valid for every `a, b`, including `a = b` where `M = 1`.
pub fn bivariate_time_kummer(spec: &BivariateSpec, x: f64, terms: usize) -> Result<Complex64> {
    let n = terms.min(x.max(0.0).ceil() as usize);
    let bz = binomial_table(spec.z(), n);
    let bq = binomial_table(spec.zeta(), n);
    let t = (-(spec.a - spec.b)).exp();
    closed_form(spec, x, terms, |k| Ok(double_binomial_bracket(&bz, &bq, t, k)))
}

/// Same closed form with the bracket written as
/// `binom(zeta, k) 2F1(-k, -z; 1 - k + zeta; e^{-(a-b)})`.
pub fn bivariate_time_2f1(spec: &BivariateSpec, x: f64, terms: usize) -> Result<BivariateValue> {
    let n = terms.min(x.max(0.0).ceil() as usize);
    let bz = binomial_table(spec.z(), n);
    let bq = binomial_table(spec.zeta(), n);
    let t = (-(spec.a - spec.b)).exp();
    let mut form = BracketForm::Gauss;
    let value = closed_form(spec, x, terms, |k| {
        match gauss_2f1_terminating(k, -spec.z(), 1.0 - k as f64 + spec.zeta(), Complex64::new(t, 0.0)) {
            Ok(f) => Ok(bq[k] * f),
            Err(Error::Domain(_)) => {
                form = BracketForm::GaussFallback;
                Ok(double_binomial_bracket(&bz, &bq, t, k))
            }
            Err(e) => Err(e),
        }
    })?;
    Ok(BivariateValue { value, form })
}

/// Time-domain value, routing `a = b` to the univariate `E_{z+zeta}^a`.
pub fn bivariate_time(spec: &BivariateSpec, x: f64) -> Result<Complex64> {
    if spec.a == spec.b {
        let s = SplineSpec::new(spec.z() + spec.zeta(), spec.a)?;
        return Ok(evaluate_time(&s, x));
    }
    bivariate_time_kummer(spec, x, x.max(0.0).ceil() as usize)
}

/// `Omega(0, a)^z Omega(0, b)^zeta`, the integral of the bivariate spline.
pub fn bivariate_mass(spec: &BivariateSpec) -> Complex64 {
    let m = |a: f64| if a == 0.0 { 1.0 } else { -(-a).exp_m1() / a };
    cpow(Complex64::new(m(spec.a), 0.0), spec.z()) * cpow(Complex64::new(m(spec.b), 0.0), spec.zeta())
}
