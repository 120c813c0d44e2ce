//! Complex exponential splines: symbols, time series, refinement filters,
//! wavelets, fractional operators and verification suites.

pub mod analysis;
pub mod bivariate;
pub mod error;
pub mod fractional;
pub mod mra;
pub mod oracle;
pub mod sampled;
pub mod special;
pub mod spline;
pub mod suites;

pub use error::{Error, Result};
pub use sampled::SampledFunction;
pub use special::{ComplexOrder, ComplexValue};
pub use spline::{evaluate_time, fourier_transform, sample, SplineSpec, TimeSeries};
