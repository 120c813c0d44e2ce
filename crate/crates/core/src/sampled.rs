//! Uniformly sampled complex functions and their file formats.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples `values[k] = f(x0 + k dx)` on a closed-left uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSampled")]
pub struct SampledFunction {
    x0: f64,
    dx: f64,
    values: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawSampled {
    x0: f64,
    dx: f64,
    values: Vec<Complex64>,
}

impl TryFrom<RawSampled> for SampledFunction {
    type Error = Error;
    fn try_from(r: RawSampled) -> Result<Self> {
        SampledFunction::new(r.x0, r.dx, r.values)
    }
}

impl SampledFunction {
    pub fn new(x0: f64, dx: f64, values: Vec<Complex64>) -> Result<Self> {
        if !x0.is_finite() {
            return Err(Error::Usage(format!("grid origin must be finite (got {x0})")));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::Usage(format!("grid step must be positive (got {dx})")));
        }
        if values.is_empty() {
            return Err(Error::Usage("sampled function needs at least one value".into()));
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Usage(format!("non-finite sample at index {k}")));
        }
        Ok(Self { x0, dx, values })
    }

    /// Samples a closure on the grid.
    pub fn from_fn(x0: f64, dx: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(x0, dx, (0..n).map(|k| f(x0 + k as f64 * dx)).collect())
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Abscissa of sample `k`.
    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    /// Every `stride`-th sample, starting with the first.
    pub fn subsample(&self, stride: usize) -> Self {
        assert!(stride > 0);
        Self {
            x0: self.x0,
            dx: self.dx * stride as f64,
            values: self.values.iter().step_by(stride).copied().collect(),
        }
    }

    /// Largest sample modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Writes `x,re,im` rows after a header line. Negative zeros print as `0`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,re,im")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{},{}", self.x(k) + 0.0, v.re + 0.0, v.im + 0.0)?;
        }
        Ok(())
    }
}
