//! `expspline` command-line tool.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use expspline::analysis::BoundCheckResult;
use expspline::bivariate::{bivariate_time_2f1, bivariate_time_kummer, BivariateSpec};
use expspline::mra::lowpass_filter;
use expspline::suites::Suite;
use expspline::{fourier_transform, sample, Error, Result, SplineSpec};
use num_complex::Complex64;
use serde::Serialize;

use config::{CommandKind, Flags, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "expspline", version, about = "Exponential splines of complex order")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Sample the spline on `x0 + k dx`
    Sample,
    /// Sweep the Fourier symbol on `omega0 + k domega`
    Fourier,
    /// Export the refinement filter coefficients
    Filter,
    /// Sample a two-parameter spline with both closed forms
    Bivariate,
    /// Run a verification suite
    Verify,
}

impl Command {
    fn kind(self) -> CommandKind {
        match self {
            Command::Sample => CommandKind::Sample,
            Command::Fourier => CommandKind::Fourier,
            Command::Filter => CommandKind::Filter,
            Command::Bivariate => CommandKind::Bivariate,
            Command::Verify => CommandKind::Verify,
        }
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } | Error::Degenerate { .. } => EXIT_NUMERIC,
        Error::Domain(_) | Error::Usage(_) | Error::Format(_) => EXIT_USAGE,
    }
}

#[derive(Debug, Serialize)]
struct SymbolSweep {
    z: Complex64,
    a: f64,
    omega0: f64,
    domega: f64,
    values: Vec<Complex64>,
}

#[derive(Debug, Serialize)]
struct BivariateBlock {
    z: Complex64,
    zeta: Complex64,
    a: f64,
    b: f64,
}

#[derive(Debug, Serialize)]
struct BivariateSamples {
    spec: BivariateBlock,
    x0: f64,
    dx: f64,
    kummer: Vec<Complex64>,
    gauss: Vec<Complex64>,
    difference: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct VerificationReport {
    suite: Suite,
    passed: bool,
    checks: Vec<BoundCheckResult>,
    /// Seconds.
    wall_time: f64,
    config_echo: RunConfig,
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// `v + 0.0` turns `-0.0` into `0.0` so CSV output never shows `-0`.
fn num(v: f64) -> f64 {
    v + 0.0
}

fn spline_spec(cfg: &RunConfig) -> Result<SplineSpec> {
    SplineSpec::new(cfg.require_z()?, cfg.a.unwrap_or(0.0))
}

fn run_sample(cfg: &RunConfig) -> Result<()> {
    let spec = spline_spec(cfg)?;
    let (x0, dx, n) = cfg.grid(cfg.x0, cfg.dx, (0.0, 1.0 / 64.0, 641))?;
    let f = sample(&spec, x0, dx, n)?;
    let text = match cfg.format {
        Format::Json => f.to_json()? + "\n",
        Format::Csv => {
            let mut buf = Vec::new();
            f.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("CSV is ASCII")
        }
    };
    emit(cfg, &text)
}

fn run_fourier(cfg: &RunConfig) -> Result<()> {
    let spec = spline_spec(cfg)?;
    let (w0, dw, n) = cfg.grid(cfg.omega0, cfg.domega, (-20.0, 0.05, 801))?;
    let values: Vec<Complex64> = (0..n).map(|k| fourier_transform(&spec, w0 + k as f64 * dw)).collect();
    let text = match cfg.format {
        Format::Json => {
            let sweep = SymbolSweep { z: spec.z(), a: spec.a(), omega0: w0, domega: dw, values };
            serde_json::to_string(&sweep)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("omega,re,im,abs\n");
            for (k, v) in values.iter().enumerate() {
                let om = w0 + k as f64 * dw;
                writeln!(s, "{},{},{},{}", num(om), num(v.re), num(v.im), v.norm()).expect("string write");
            }
            s
        }
    };
    emit(cfg, &text)
}

fn run_filter(cfg: &RunConfig) -> Result<()> {
    let spec = spline_spec(cfg)?;
    let f = lowpass_filter(&spec, cfg.tol_or(1e-12)?)?;
    let text = match cfg.format {
        Format::Json => f.to_json()? + "\n",
        Format::Csv => {
            let mut s = String::from("k,re,im\n");
            for (k, w) in f.weights.iter().enumerate() {
                writeln!(s, "{k},{},{}", num(w.re), num(w.im)).expect("string write");
            }
            s
        }
    };
    emit(cfg, &text)
}

fn run_bivariate(cfg: &RunConfig) -> Result<()> {
    let spec = BivariateSpec::new(cfg.require_z()?, cfg.require_zeta()?, cfg.a.unwrap_or(0.0), cfg.b.unwrap_or(0.0))?;
    let (x0, dx, n) = cfg.grid(cfg.x0, cfg.dx, (0.0, 1.0 / 64.0, 513))?;
    let mut kummer = Vec::with_capacity(n);
    let mut gauss = Vec::with_capacity(n);
    for k in 0..n {
        let x = x0 + k as f64 * dx;
        let terms = x.max(0.0).ceil() as usize;
        kummer.push(bivariate_time_kummer(&spec, x, terms)?);
        gauss.push(bivariate_time_2f1(&spec, x, terms)?.value);
    }
    let difference: Vec<f64> = kummer.iter().zip(&gauss).map(|(p, q)| (p - q).norm()).collect();
    let text = match cfg.format {
        Format::Json => {
            let block = BivariateBlock { z: spec.z(), zeta: spec.zeta(), a: spec.a(), b: spec.b() };
            serde_json::to_string(&BivariateSamples { spec: block, x0, dx, kummer, gauss, difference })? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("x,kummer_re,kummer_im,gauss_re,gauss_im,difference\n");
            for k in 0..n {
                let (p, q) = (kummer[k], gauss[k]);
                writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    num(x0 + k as f64 * dx),
                    num(p.re),
                    num(p.im),
                    num(q.re),
                    num(q.im),
                    difference[k]
                )
                .expect("string write");
            }
            s
        }
    };
    emit(cfg, &text)
}

/// Returns whether every check passed. The report is written either way.
fn run_verify(cfg: &RunConfig) -> Result<bool> {
    let suite = cfg.suite.unwrap_or(Suite::All);
    let start = Instant::now();
    let checks = suite.run()?;
    let wall_time = start.elapsed().as_secs_f64();
    let passed = checks.iter().all(|c| c.passed);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let count = checks.len();
    let text = match cfg.format {
        Format::Json => {
            let report = VerificationReport { suite, passed, checks, wall_time, config_echo: cfg.clone() };
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("name,grid_size,max_violation,passed\n");
            for c in &checks {
                writeln!(s, "\"{}\",{},{:e},{}", c.name, c.grid_size, c.max_violation, c.passed).expect("string write");
            }
            s
        }
    };
    emit(cfg, &text)?;
    eprintln!("suite {suite}: {count} checks, {failed} failed, {wall_time:.1} s");
    Ok(passed)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = RunConfig::resolve(cli.command.kind(), &cli.flags)?;
    match cli.command {
        Command::Sample => run_sample(&cfg)?,
        Command::Fourier => run_fourier(&cfg)?,
        Command::Filter => run_filter(&cfg)?,
        Command::Bivariate => run_bivariate(&cfg)?,
        Command::Verify => {
            if !run_verify(&cfg)? {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
