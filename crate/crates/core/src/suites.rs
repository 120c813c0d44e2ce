//! Verification suites over the default parameter matrix.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    check_circle_asymptotics, check_cos_cosh_lemma, check_omega_sandwich, check_spectrum_modulus,
    check_spline_sandwich, linear_grid, random_grid, riesz_bounds, BoundCheckResult, RIESZ_K_MAX,
};
use crate::bivariate::{
    bivariate_fourier, bivariate_mass, bivariate_time_2f1, bivariate_time_kummer, BivariateSpec, BracketForm,
};
use crate::error::{Error, Result};
use crate::fractional::verify_delta_identity;
use crate::mra::{autocorrelation, check_two_scale, wavelet_orthonormality, Grid, WaveletSpec};
use crate::oracle::{
    convolve_extrapolated, convolve_oracle, convolve_prefix, dft, error_exponents, indicator_samples,
    periodized_symbol, trapezoid, trapezoid_extrapolated,
};
use crate::sampled::SampledFunction;
use crate::special::fmt_complex;
use crate::spline::{evaluate_time, fourier_transform, sample, SplineSpec, TimeSeries};

pub const MATRIX_RE: [f64; 4] = [1.2, 2.0, 2.5, 4.0];
pub const MATRIX_IM: [f64; 3] = [0.0, 1.0, -1.0];
pub const MATRIX_A: [f64; 4] = [0.0, 0.5, 1.0, 3.0];

/// The 48 specs `Re z x Im z x a`.
pub fn test_matrix() -> Vec<SplineSpec> {
    let mut out = Vec::new();
    for re in MATRIX_RE {
        for im in MATRIX_IM {
            for a in MATRIX_A {
                out.push(SplineSpec::new(Complex64::new(re, im), a).expect("matrix specs are valid"));
            }
        }
    }
    out
}

fn label(spec: &SplineSpec) -> String {
    format!("z={} a={}", fmt_complex(spec.z()), spec.a())
}

fn max_abs_diff<'a>(a: impl Iterator<Item = &'a Complex64>, b: impl Iterator<Item = &'a Complex64>) -> f64 {
    a.zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Suite names accepted by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Inequalities,
    FourierConsistency,
    TwoScale,
    Riesz,
    Wavelet,
    DeltaIdentity,
    Bivariate,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Inequalities,
        Suite::FourierConsistency,
        Suite::TwoScale,
        Suite::Riesz,
        Suite::Wavelet,
        Suite::DeltaIdentity,
        Suite::Bivariate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Inequalities => "inequalities",
            Suite::FourierConsistency => "fourier-consistency",
            Suite::TwoScale => "two-scale",
            Suite::Riesz => "riesz",
            Suite::Wavelet => "wavelet",
            Suite::DeltaIdentity => "delta-identity",
            Suite::Bivariate => "bivariate",
            Suite::All => "all",
        }
    }

    /// Runs the suite; `All` runs every suite in declaration order.
    pub fn run(&self) -> Result<Vec<BoundCheckResult>> {
        match self {
            Suite::Inequalities => inequalities_suite(),
            Suite::FourierConsistency => fourier_consistency_suite(),
            Suite::TwoScale => two_scale_suite(),
            Suite::Riesz => riesz_suite(),
            Suite::Wavelet => wavelet_suite(),
            Suite::DeltaIdentity => delta_identity_suite(),
            Suite::Bivariate => bivariate_suite(),
            Suite::All => {
                let mut out = Vec::new();
                for s in Suite::ALL {
                    out.extend(s.run()?);
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown suite '{s}' (expected one of inequalities, fourier-consistency, two-scale, riesz, wavelet, delta-identity, bivariate, all)"
                ))
            })
    }
}

/// Sweep sizes and seeds of the inequality suite.
pub const SWEEP_POINTS: usize = 100_000;
pub const SWEEP_SEED: u64 = 0x5EED_0001;
pub const INEQUALITY_DECAYS: [f64; 3] = [0.1, 1.0, 10.0];

pub fn inequalities_suite() -> Result<Vec<BoundCheckResult>> {
    let mut out = vec![check_cos_cosh_lemma(&random_grid(-50.0, 50.0, SWEEP_POINTS, SWEEP_SEED))];
    let omegas = random_grid(-200.0, 200.0, SWEEP_POINTS, SWEEP_SEED + 1);
    for a in INEQUALITY_DECAYS {
        out.push(check_omega_sandwich(a, &omegas)?);
        for re in MATRIX_RE {
            for im in MATRIX_IM {
                let s = SplineSpec::new(Complex64::new(re, im), a)?;
                out.push(check_spline_sandwich(&s, &omegas)?);
            }
        }
    }
    let circle = check_circle_asymptotics(&[10.0, 20.0, 30.0], &linear_grid(-60.0, 60.0, 12_001))?;
    out.push(circle.identity);
    out.push(circle.summary);
    let omegas = linear_grid(-60.0, 60.0, 4001);
    for s in test_matrix() {
        let mut r = check_spectrum_modulus(&s, &omegas);
        r.name = format!("spectrum modulus {}", label(&s));
        out.push(r);
    }
    Ok(out)
}

/// Riemann-sum transform of samples on `[0, 40)` with `dx = 1/64`.
pub const DFT_LENGTH: f64 = 40.0;
pub const DFT_STEP: f64 = 1.0 / 64.0;
pub const DFT_TOL: f64 = 1e-5;

/// DFT errors for one spec: against the symbol and against the aliased symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DftConsistency {
    pub raw_error: f64,
    pub aliased_error: f64,
    pub frequencies: usize,
}

pub fn dft_consistency(spec: &SplineSpec) -> Result<DftConsistency> {
    let n = (DFT_LENGTH / DFT_STEP).round() as usize;
    let f = sample(spec, 0.0, DFT_STEP, n)?;
    let mut raw = 0.0f64;
    let mut aliased = 0.0f64;
    let spectrum = dft(&f);
    for (om, v) in &spectrum {
        raw = raw.max((v - fourier_transform(spec, *om)).norm());
        aliased = aliased.max((v - periodized_symbol(spec, *om, DFT_STEP)?).norm());
    }
    Ok(DftConsistency { raw_error: raw, aliased_error: aliased, frequencies: spectrum.len() })
}

pub const PARTITION_LENGTH: f64 = 60.0;
pub const PARTITION_STEP: f64 = 1.0 / 128.0;
pub const PARTITION_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionConstant {
    pub plain_error: f64,
    pub extrapolated_error: f64,
}

/// Trapezoid integral of the samples on `[0, 60]` against `Omega(0, a)^z`,
/// plain and extrapolated over the error exponents `z, 2, z + 1`.
pub fn partition_constant(spec: &SplineSpec) -> Result<PartitionConstant> {
    let n = (PARTITION_LENGTH / PARTITION_STEP).round() as usize + 1;
    let f = sample(spec, 0.0, PARTITION_STEP, n)?;
    let want = fourier_transform(spec, 0.0);
    let z = spec.z();
    let mut exps: Vec<Complex64> = Vec::new();
    for e in [z, Complex64::new(2.0, 0.0), z + 1.0] {
        if !exps.iter().any(|o| (o - e).norm() < 1e-12) {
            exps.push(e);
        }
    }
    Ok(PartitionConstant {
        plain_error: (trapezoid(&f) - want).norm(),
        extrapolated_error: (trapezoid_extrapolated(&f, &exps)? - want).norm(),
    })
}

pub const SEMIGROUP_PAIRS: [(Complex64, Complex64); 2] = [
    (Complex64::new(1.5, 0.0), Complex64::new(1.5, 0.0)),
    (Complex64::new(2.0, 1.0), Complex64::new(2.0, -1.0)),
];
pub const SEMIGROUP_STEP: f64 = 1.0 / 128.0;
pub const SEMIGROUP_LENGTH: f64 = 12.0;
pub const SEMIGROUP_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Semigroup {
    pub plain_error: f64,
    pub extrapolated_error: f64,
}

/// `E_{z1}^a * E_{z2}^a` against `E_{z1+z2}^a` on `[0, 12]`.
pub fn semigroup(z1: Complex64, z2: Complex64, a: f64) -> Result<Semigroup> {
    let s1 = SplineSpec::new(z1, a)?;
    let s2 = SplineSpec::new(z2, a)?;
    let s12 = SplineSpec::new(z1 + z2, a)?;
    let n = (SEMIGROUP_LENGTH / SEMIGROUP_STEP).round() as usize + 1;
    let f = sample(&s1, 0.0, SEMIGROUP_STEP, n)?;
    let g = sample(&s2, 0.0, SEMIGROUP_STEP, n)?;
    let plain = convolve_prefix(&f, &g, n)?;
    let want = sample(&s12, 0.0, SEMIGROUP_STEP, n)?;
    let plain_error = max_abs_diff(plain.values().iter(), want.values().iter());
    let exps = error_exponents(&[z1, z2], 3.0);
    let ext = convolve_extrapolated(&f, &g, &exps, n)?;
    let series = TimeSeries::new(&s12, SEMIGROUP_LENGTH);
    let extrapolated_error = (0..ext.len())
        .map(|k| (ext.values()[k] - series.eval(ext.x(k))).norm())
        .fold(0.0, f64::max);
    Ok(Semigroup { plain_error, extrapolated_error })
}

/// Max error of the `n`-fold indicator convolution against `E_n^0` samples.
pub fn classical_reduction(n: usize, dx: f64) -> Result<f64> {
    let chi = indicator_samples(dx)?;
    let mut acc = chi.clone();
    for _ in 1..n {
        acc = convolve_oracle(&acc, &chi)?;
    }
    let spec = SplineSpec::new(Complex64::new(n as f64, 0.0), 0.0)?;
    let want = sample(&spec, acc.x0(), dx, acc.len())?;
    Ok(max_abs_diff(acc.values().iter(), want.values().iter()))
}

/// Hat values `E_2^0` at `0, 1/2, 1`, which must be `0, 1/2, 1` exactly.
pub fn hat_values() -> Result<[Complex64; 3]> {
    let hat = SplineSpec::new(Complex64::new(2.0, 0.0), 0.0)?;
    Ok([evaluate_time(&hat, 0.0), evaluate_time(&hat, 0.5), evaluate_time(&hat, 1.0)])
}

pub fn fourier_consistency_suite() -> Result<Vec<BoundCheckResult>> {
    let mut out = Vec::new();
    for s in test_matrix() {
        let d = dft_consistency(&s)?;
        out.push(BoundCheckResult::new(format!("dft {}", label(&s)), d.frequencies, d.aliased_error, DFT_TOL));
    }
    for s in test_matrix() {
        let p = partition_constant(&s)?;
        let n = (PARTITION_LENGTH / PARTITION_STEP) as usize + 1;
        out.push(BoundCheckResult::new(format!("partition {}", label(&s)), n, p.plain_error, PARTITION_TOL));
    }
    for (z1, z2) in SEMIGROUP_PAIRS {
        for a in MATRIX_A {
            let r = semigroup(z1, z2, a)?;
            let n = (SEMIGROUP_LENGTH / SEMIGROUP_STEP) as usize + 1;
            out.push(BoundCheckResult::new(
                format!("semigroup z1={} z2={} a={a}", fmt_complex(z1), fmt_complex(z2)),
                n,
                r.extrapolated_error,
                SEMIGROUP_TOL,
            ));
        }
    }
    let hv = hat_values()?;
    let hat_err = (hv[0] - 0.0).norm().max((hv[1] - 0.5).norm()).max((hv[2] - 1.0).norm());
    out.push(BoundCheckResult::new("hat values", 3, hat_err, 0.0));
    let dx = 1.0 / 256.0;
    for n in [2usize, 3, 4] {
        out.push(BoundCheckResult::new(
            format!("indicator {n}-fold convolution"),
            n * 256 + 1,
            classical_reduction(n, dx)?,
            dx * dx,
        ));
    }
    Ok(out)
}

pub const TWO_SCALE_TOL: f64 = 1e-8;

pub fn two_scale_grid() -> Grid {
    Grid { x0: 0.0, dx: 1.0 / 32.0, n: 12 * 32 + 1 }
}

pub fn two_scale_suite() -> Result<Vec<BoundCheckResult>> {
    test_matrix().iter().map(|s| check_two_scale(s, &two_scale_grid(), TWO_SCALE_TOL)).collect()
}

pub const RIESZ_GRID: usize = 4096;
pub const RIESZ_FLOOR: f64 = 1e-8;

pub fn riesz_suite() -> Result<Vec<BoundCheckResult>> {
    Ok(test_matrix()
        .iter()
        .map(|s| {
            let b = riesz_bounds(s, RIESZ_GRID, RIESZ_K_MAX);
            BoundCheckResult {
                name: format!("riesz {} A>={:e} B<={:e}", label(s), b.lower, b.upper),
                grid_size: RIESZ_GRID,
                max_violation: (RIESZ_FLOOR - b.lower).max(0.0),
                passed: b.lower > RIESZ_FLOOR && b.upper.is_finite() && b.lower <= b.upper,
            }
        })
        .collect())
}

pub const WAVELET_CASES: [(f64, f64); 2] = [(2.0, 0.0), (2.5, 1.0)];
pub const WAVELET_SHIFTS: [i64; 3] = [0, 1, 2];
pub const WAVELET_TOL: f64 = 1e-6;
pub const WAVELET_WINDOW: usize = 1000;

pub fn wavelet_suite() -> Result<Vec<BoundCheckResult>> {
    let mut out = Vec::new();
    for (re, a) in WAVELET_CASES {
        let w = WaveletSpec::new(SplineSpec::new(Complex64::new(re, 0.0), a)?)?;
        let o = wavelet_orthonormality(&w, &WAVELET_SHIFTS, WAVELET_WINDOW)?;
        out.push(BoundCheckResult::new(
            format!("orthonormality z={re} a={a}"),
            o.nodes,
            o.max_error,
            WAVELET_TOL,
        ));
        let k = w.k_max_for(1e-9);
        let grid = linear_grid(0.0, 1.0, 1024);
        let mut min_r = f64::INFINITY;
        let mut period_err = 0.0f64;
        for (i, &om) in grid.iter().enumerate() {
            let r = autocorrelation(&w, om, k).value;
            min_r = min_r.min(r);
            if i % 64 == 0 {
                period_err = period_err.max((r - autocorrelation(&w, om + 1.0, k).value).abs());
            }
        }
        out.push(BoundCheckResult {
            name: format!("autocorrelation positivity z={re} a={a} min={min_r:e}"),
            grid_size: grid.len(),
            max_violation: (-min_r).max(0.0),
            passed: min_r > 0.0,
        });
        out.push(BoundCheckResult::new(format!("autocorrelation period z={re} a={a}"), 16, period_err, 1e-9));
    }
    Ok(out)
}

pub const DELTA_TERMS: usize = 200;
pub const DELTA_TOL: f64 = 1e-6;

pub fn delta_grid() -> Vec<f64> {
    linear_grid(-8.0 * PI, 8.0 * PI, 4001)
}

pub fn delta_identity_suite() -> Result<Vec<BoundCheckResult>> {
    let grid = delta_grid();
    test_matrix()
        .iter()
        .map(|s| verify_delta_identity(s, DELTA_TERMS, &grid, DELTA_TOL).map(|d| d.check))
        .collect()
}

pub fn bivariate_cases() -> [BivariateSpec; 2] {
    [
        BivariateSpec::new(Complex64::new(2.0, 0.5), Complex64::new(1.5, 0.0), 1.0, 0.3).expect("valid"),
        BivariateSpec::new(Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0), 1.0, 1.0).expect("valid"),
    ]
}

pub const BIVARIATE_STEP: f64 = 1.0 / 128.0;
pub const BIVARIATE_LENGTH: f64 = 8.0;

/// Cross-checks for one two-parameter spline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariateStudy {
    /// `max |Gauss form - Kummer form|` on the grid.
    pub forms_agreement: f64,
    pub convolution_error: f64,
    pub extrapolated_convolution_error: f64,
    /// Largest error against `E_{z+zeta}^a` when `a = b`.
    pub collapse_error: Option<f64>,
    pub dft_error: f64,
    pub mass_error: f64,
    pub fallback_used: bool,
}

pub fn bivariate_study(spec: &BivariateSpec) -> Result<BivariateStudy> {
    let (f_spec, g_spec) = spec.factors();
    let n = (BIVARIATE_LENGTH / BIVARIATE_STEP).round() as usize + 1;
    let mut kummer = Vec::with_capacity(n);
    let mut forms = 0.0f64;
    let mut fallback = false;
    for k in 0..n {
        let x = k as f64 * BIVARIATE_STEP;
        let terms = x.ceil() as usize;
        let v = bivariate_time_kummer(spec, x, terms)?;
        let g = bivariate_time_2f1(spec, x, terms)?;
        fallback |= g.form == BracketForm::GaussFallback;
        forms = forms.max((v - g.value).norm());
        kummer.push(v);
    }
    let f = sample(&f_spec, 0.0, BIVARIATE_STEP, n)?;
    let g = sample(&g_spec, 0.0, BIVARIATE_STEP, n)?;
    let conv = convolve_prefix(&f, &g, n)?;
    let convolution_error = max_abs_diff(conv.values().iter(), kummer.iter());
    let exps = error_exponents(&[spec.z(), spec.zeta()], 3.0);
    let ext = convolve_extrapolated(&f, &g, &exps, n)?;
    let stride = (ext.dx() / BIVARIATE_STEP).round() as usize;
    let extrapolated_convolution_error = (0..ext.len())
        .map(|k| (ext.values()[k] - kummer[k * stride]).norm())
        .fold(0.0, f64::max);
    let collapse_error = if spec.a() == spec.b() {
        let u = SplineSpec::new(spec.z() + spec.zeta(), spec.a())?;
        let series = TimeSeries::new(&u, BIVARIATE_LENGTH);
        Some((0..n).map(|k| (kummer[k] - series.eval(k as f64 * BIVARIATE_STEP)).norm()).fold(0.0, f64::max))
    } else {
        None
    };
    let m = (DFT_LENGTH / DFT_STEP).round() as usize;
    let mut samples = Vec::with_capacity(m);
    for k in 0..m {
        let x = k as f64 * DFT_STEP;
        samples.push(bivariate_time_kummer(spec, x, x.ceil() as usize)?);
    }
    let sf = SampledFunction::new(0.0, DFT_STEP, samples)?;
    let spectrum = dft(&sf);
    let dft_error = spectrum
        .iter()
        .map(|(om, v)| (v - bivariate_fourier(spec, *om)).norm())
        .fold(0.0, f64::max);
    let mass_error = (trapezoid(&sf) - bivariate_mass(spec)).norm();
    Ok(BivariateStudy {
        forms_agreement: forms,
        convolution_error,
        extrapolated_convolution_error,
        collapse_error,
        dft_error,
        mass_error,
        fallback_used: fallback,
    })
}

pub fn bivariate_suite() -> Result<Vec<BoundCheckResult>> {
    let mut out = Vec::new();
    let n = (BIVARIATE_LENGTH / BIVARIATE_STEP) as usize + 1;
    for s in bivariate_cases() {
        let tag = format!(
            "z={} zeta={} a={} b={}",
            fmt_complex(s.z()),
            fmt_complex(s.zeta()),
            s.a(),
            s.b()
        );
        let r = bivariate_study(&s)?;
        out.push(BoundCheckResult::new(format!("bivariate forms {tag}"), n, r.forms_agreement, 1e-10));
        out.push(BoundCheckResult::new(format!("bivariate convolution {tag}"), n, r.convolution_error, 1e-4));
        if let Some(c) = r.collapse_error {
            out.push(BoundCheckResult::new(format!("bivariate collapse {tag}"), n, c, 1e-8));
        }
        let m = (DFT_LENGTH / DFT_STEP) as usize;
        out.push(BoundCheckResult::new(format!("bivariate dft {tag}"), m, r.dft_error, 1e-4));
        out.push(BoundCheckResult::new(format!("bivariate mass {tag}"), m, r.mass_error, 1e-4));
    }
    Ok(out)
}
