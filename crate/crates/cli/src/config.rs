use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use expspline::suites::Suite;
use expspline::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Sample,
    Fourier,
    Filter,
    Bivariate,
    Verify,
}

/// Flags shared by every subcommand. Unset flags fall back to `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Spline order as `re+imi`, e.g. `2.5+1i`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Second order of a two-parameter spline
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub zeta: Option<String>,
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub b: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    #[arg(long, global = true)]
    pub dx: Option<f64>,
    #[arg(long, global = true)]
    pub domega: Option<f64>,
    /// Number of grid points
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Verification suite name
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// JSON file with any of the above keys
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// A complex value in a config file: `"2.5+1i"` or `[2.5, 1.0]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ComplexField {
    Text(String),
    Pair([f64; 2]),
}

impl ComplexField {
    fn resolve(self) -> Result<Complex64> {
        match self {
            ComplexField::Text(s) => parse_complex(&s),
            ComplexField::Pair([re, im]) => Ok(Complex64::new(re, im)),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    z: Option<ComplexField>,
    zeta: Option<ComplexField>,
    a: Option<f64>,
    b: Option<f64>,
    x0: Option<f64>,
    omega0: Option<f64>,
    dx: Option<f64>,
    domega: Option<f64>,
    n: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    suite: Option<String>,
}

/// Fully resolved run configuration, echoed into verification reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
}

/// Parses `re+imi` style literals: `2`, `2.5+1i`, `1.2-0.5i`, `-i`, `3e-2+1e1i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Usage(format!("cannot parse complex number '{s}' (expected re+imi, e.g. 2.5+1i)"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return match t.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().map_err(|_| bad())? };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        p => p.parse::<f64>().map_err(|_| bad())?,
    };
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Usage(format!("invalid config {}: {e}", path.display())))
}

impl RunConfig {
    /// Merges flags over the optional config file. Flags win.
    pub fn resolve(command: CommandKind, flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let complex = |flag: &Option<String>, field: Option<ComplexField>| -> Result<Option<Complex64>> {
            match (flag, field) {
                (Some(s), _) => parse_complex(s).map(Some),
                (None, Some(f)) => f.resolve().map(Some),
                (None, None) => Ok(None),
            }
        };
        let suite = match flags.suite.clone().or(file.suite) {
            Some(s) => Some(s.parse::<Suite>()?),
            None => None,
        };
        let default_format = match command {
            CommandKind::Filter | CommandKind::Verify => Format::Json,
            _ => Format::Csv,
        };
        Ok(RunConfig {
            command,
            z: complex(&flags.z, file.z)?,
            zeta: complex(&flags.zeta, file.zeta)?,
            a: flags.a.or(file.a),
            b: flags.b.or(file.b),
            x0: flags.x0.or(file.x0),
            omega0: flags.omega0.or(file.omega0),
            dx: flags.dx.or(file.dx),
            domega: flags.domega.or(file.domega),
            n: flags.n.or(file.n),
            tol: flags.tol.or(file.tol),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or(default_format),
            suite,
        })
    }

    pub fn require_z(&self) -> Result<Complex64> {
        self.z.ok_or_else(|| Error::Usage("--z is required".into()))
    }

    pub fn require_zeta(&self) -> Result<Complex64> {
        self.zeta.ok_or_else(|| Error::Usage("--zeta is required".into()))
    }

    /// Grid `(start, step, n)` with validated step and size.
    pub fn grid(&self, start: Option<f64>, step: Option<f64>, defaults: (f64, f64, usize)) -> Result<(f64, f64, usize)> {
        let start = start.unwrap_or(defaults.0);
        let step = step.unwrap_or(defaults.1);
        let n = self.n.unwrap_or(defaults.2);
        if !start.is_finite() {
            return Err(Error::Usage(format!("grid start {start} must be finite")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Usage(format!("grid step {step} must be positive")));
        }
        if n == 0 {
            return Err(Error::Usage("--n must be at least 1".into()));
        }
        Ok((start, step, n))
    }

    pub fn tol_or(&self, default: f64) -> Result<f64> {
        let t = self.tol.unwrap_or(default);
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Usage(format!("--tol {t} must be positive")));
        }
        Ok(t)
    }
}
