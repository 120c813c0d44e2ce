//! Independent numerical oracles: discrete convolution, trapezoid sums with
//! Richardson extrapolation, discrete Fourier transforms, periodized symbols
//! and Gauss-Legendre quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::sampled::SampledFunction;
use crate::special::cpow;
use crate::spline::{fourier_transform, numerator, SplineSpec};

fn same_step(f: &SampledFunction, g: &SampledFunction) -> Result<()> {
    if (f.dx() - g.dx()).abs() > 1e-12 * f.dx().max(g.dx()) {
        return Err(Error::Usage(format!(
            "grid steps differ: {} vs {}",
            f.dx(),
            g.dx()
        )));
    }
    Ok(())
}

/// Discrete convolution `dx * sum_j f_j g_{k-j}` on the grid starting at
/// `f.x0 + g.x0`, of length `|f| + |g| - 1`.
///
/// For integrands vanishing at both ends of their overlap this is the
/// trapezoid rule. Piecewise constant factors are best sampled at cell
/// midpoints, as [`indicator_samples`] does.
pub fn convolve_oracle(f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    same_step(f, g)?;
    let n = f.len() + g.len() - 1;
    convolve_prefix(f, g, n)
}

/// First `n` samples of [`convolve_oracle`].
pub fn convolve_prefix(f: &SampledFunction, g: &SampledFunction, n: usize) -> Result<SampledFunction> {
    same_step(f, g)?;
    let (fv, gv) = (f.values(), g.values());
    let n = n.min(fv.len() + gv.len() - 1).max(1);
    let h = f.dx();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, o) in out.iter_mut().enumerate() {
        let lo = k.saturating_sub(gv.len() - 1);
        let hi = k.min(fv.len() - 1);
        let mut s = Complex64::new(0.0, 0.0);
        for j in lo..=hi {
            s += fv[j] * gv[k - j];
        }
        *o = s * h;
    }
    SampledFunction::new(f.x0() + g.x0(), h, out)
}

/// Samples of the indicator of `[0, 1]` at the `1/dx` cell midpoints
/// `(j + 1/2) dx`. Convolving two of these gives the hat exactly on the
/// grid `dx, 2 dx, ..., 2 - dx`.
pub fn indicator_samples(dx: f64) -> Result<SampledFunction> {
    let p = unit_steps(dx)?;
    SampledFunction::new(0.5 * dx, dx, vec![Complex64::new(1.0, 0.0); p])
}

/// Number of grid steps per unit length; errors unless `1/dx` is an integer.
pub fn unit_steps(dx: f64) -> Result<usize> {
    let p = (1.0 / dx).round();
    if !(dx > 0.0) || p < 1.0 || (p * dx - 1.0).abs() > 1e-12 {
        return Err(Error::Usage(format!(
            "grid step {dx} must divide 1 exactly (1/dx integer)"
        )));
    }
    Ok(p as usize)
}

/// Error exponents of a trapezoid-type rule applied to integrands with
/// algebraic endpoint singularities of the given orders: `z + j` from each
/// order and the even powers, keeping those with real part below `max_re`.
pub fn error_exponents(orders: &[Complex64], max_re: f64) -> Vec<Complex64> {
    let mut cand = Vec::new();
    for &z in orders {
        let mut j = 0.0;
        while z.re + j < max_re {
            cand.push(z + j);
            j += 1.0;
        }
    }
    let mut e = 2.0;
    while e < max_re {
        cand.push(Complex64::new(e, 0.0));
        e += 2.0;
    }
    let mut out: Vec<Complex64> = Vec::new();
    for c in cand {
        if !out.iter().any(|o| (o - c).norm() < 1e-12) {
            out.push(c);
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

/// Solves the Richardson system for step ratios `2^j`, returning the weights
/// `w_j` with `sum_j w_j T(2^j h) = T(0) + o(h^{max exponent})`.
fn richardson_weights(exponents: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = exponents.len() + 1;
    // Rows: constraint sum_j w_j = 1, and sum_j w_j 2^{j p} = 0 for each p.
    let mut a = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..m {
        a[0][j] = Complex64::new(1.0, 0.0);
        for (r, p) in exponents.iter().enumerate() {
            a[r + 1][j] = cpow(Complex64::new(2f64.powi(j as i32), 0.0), *p);
        }
    }
    rhs[0] = Complex64::new(1.0, 0.0);
    solve_dense(a, rhs)
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve_dense(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Err(Error::Usage("singular extrapolation system (repeated exponents)".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let t = a[col][c];
                a[r][c] -= f * t;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Ok(x)
}

/// Trapezoid rule over the whole grid.
pub fn trapezoid(f: &SampledFunction) -> Complex64 {
    let v = f.values();
    let s: Complex64 = v.iter().sum();
    let ends = if v.len() > 1 { (v[0] + v[v.len() - 1]) * 0.5 } else { v[0] };
    (s - ends) * f.dx()
}

/// Trapezoid rule extrapolated across the nested sub-grids with strides
/// `1, 2, ..., 2^m` (`m` = number of exponents).
pub fn trapezoid_extrapolated(f: &SampledFunction, exponents: &[Complex64]) -> Result<Complex64> {
    let stride = 1usize << exponents.len();
    if (f.len() - 1) % stride != 0 {
        return Err(Error::Usage(format!(
            "{} intervals are not divisible by the coarsest stride {stride}",
            f.len() - 1
        )));
    }
    let w = richardson_weights(exponents)?;
    Ok(w.iter()
        .enumerate()
        .map(|(j, wj)| wj * trapezoid(&f.subsample(1 << j)))
        .sum())
}

/// Convolution extrapolated across nested sub-grids, returned on the
/// coarsest grid (step `dx 2^m`) and restricted to the first `n_fine`
/// fine-grid abscissae.
pub fn convolve_extrapolated(
    f: &SampledFunction,
    g: &SampledFunction,
    exponents: &[Complex64],
    n_fine: usize,
) -> Result<SampledFunction> {
    same_step(f, g)?;
    let w = richardson_weights(exponents)?;
    let top = 1usize << exponents.len();
    let n_out = (n_fine.min(f.len() + g.len() - 1) - 1) / top + 1;
    let mut out = vec![Complex64::new(0.0, 0.0); n_out];
    for (j, wj) in w.iter().enumerate() {
        let s = 1usize << j;
        let conv = convolve_prefix(&f.subsample(s), &g.subsample(s), (n_out - 1) * (top / s) + 1)?;
        for (i, o) in out.iter_mut().enumerate() {
            *o += wj * conv.values()[i * (top / s)];
        }
    }
    SampledFunction::new(f.x0() + g.x0(), f.dx() * top as f64, out)
}

/// Riemann-sum Fourier transform `dx sum_k f(x_k) e^{-i omega x_k}` at the
/// grid frequencies `omega_j = 2 pi j / (n dx)`, `j` in `(-n/2, n/2]`,
/// returned in increasing frequency order.
pub fn dft(f: &SampledFunction) -> Vec<(f64, Complex64)> {
    let n = f.len();
    let mut buf: Vec<Complex64> = f.values().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let period = n as f64 * f.dx();
    let mut out: Vec<(f64, Complex64)> = (0..n)
        .map(|j| {
            let js = if j > n / 2 { j as f64 - n as f64 } else { j as f64 };
            let om = 2.0 * PI * js / period;
            let phase = Complex64::new(0.0, -om * f.x0()).exp();
            (om, buf[j] * phase * f.dx())
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `sum_m E^(omega + 2 pi m / dx)`: the symbol aliased onto the sampling
/// grid, which is what the Riemann-sum transform of exact samples equals
/// on an unbounded domain. Requires `1/dx` integer.
pub fn periodized_symbol(spec: &SplineSpec, omega: f64, dx: f64) -> Result<Complex64> {
    unit_steps(dx)?;
    const DIRECT: usize = 64;
    let z = spec.z();
    let w = Complex64::new(spec.a(), omega);
    let kappa = 2.0 * PI / dx;
    // With 1/dx integer every alias shares the numerator 1 - e^{-w}.
    let num = cpow(numerator(omega, spec.a()), z);
    let g = |u: Complex64| cpow(u, -z);
    let mut s = Complex64::new(0.0, 0.0);
    for m in 1..=DIRECT {
        let mk = Complex64::new(0.0, kappa * m as f64);
        s += g(w + mk) + g(w - mk);
    }
    // Euler-Maclaurin tail for m > DIRECT.
    for sign in [1.0, -1.0] {
        let c = Complex64::new(0.0, sign * kappa);
        let u = w + c * DIRECT as f64;
        let integral = cpow(u, 1.0 - z) / (c * (z - 1.0));
        let g0 = g(u);
        let g1 = -z * c * cpow(u, -z - 1.0);
        let g3 = -z * (z + 1.0) * (z + 2.0) * c * c * c * cpow(u, -z - 3.0);
        s += integral - g0 / 2.0 - g1 / 12.0 + g3 / 720.0;
    }
    Ok(fourier_transform(spec, omega) + num * s)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { t } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (t * pn - pnm1) / (t * t - 1.0);
            let dt = pn / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Hurwitz zeta `sum_{n>=0} (n + q)^{-s}` for real `s > 1`, `q > 0`.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    const B2K: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let shift = if q < 20.0 { (20.0 - q).ceil() as usize } else { 0 };
    let mut sum: f64 = (0..shift).map(|n| (n as f64 + q).powf(-s)).sum();
    let a = q + shift as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // B_{2k}/(2k)! s (s+1) ... (s+2k-2) a^{-s-2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut pw = a.powf(-s - 1.0);
    for (k, b) in B2K.iter().enumerate() {
        let kk = (k + 1) as f64;
        sum += b / fact * rising * pw;
        rising *= (s + 2.0 * kk - 1.0) * (s + 2.0 * kk);
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
        pw /= a * a;
    }
    sum
}
