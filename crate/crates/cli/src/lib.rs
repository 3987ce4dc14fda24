//! Command-line driver: coefficient dumps, line/circle/sphere/Heisenberg
//! derivative checks, convergence sweeps, smoothing studies and benchmarks.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use boas::BoasError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
pub mod report;

pub use report::{Format, Row, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Boas(#[from] BoasError),
    #[error("{0}")]
    Io(String),
}

#[derive(Parser, Debug)]
#[command(name = "boas", version, about = "Boas-type derivative formulas for one-parameter groups")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dump a coefficient table with running mass.
    Coeffs(CoeffsArgs),
    /// Differentiate a line signal by translation, at points or over a sweep of N.
    LineDiff(LineDiffArgs),
    /// Riesz derivative of a seeded trigonometric polynomial.
    CircleRiesz(CircleRieszArgs),
    /// Laplace-Beltrami eigenvalue check on a spherical harmonic.
    SphereLap(SphereLapArgs),
    /// Commutator and Laplacian-rotation residuals of a seeded expansion.
    SphereCommutator(SphereCommutatorArgs),
    /// Smoothing operator error against the modulus-of-continuity bound.
    Smooth(SmoothArgs),
    /// Boas derivative along the Schrodinger group.
    Schrodinger(SchrodingerArgs),
    /// Boas derivative along a Heisenberg field.
    Heisenberg(HeisenbergArgs),
    /// Accuracy and cost of Boas against finite differences.
    Bench(BenchArgs),
}

/// `NMIN:NMAX`, expanded to `NMIN, 2 NMIN, 4 NMIN, ... <= NMAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    pub min: usize,
    pub max: usize,
}

impl Sweep {
    pub fn sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut n = self.min;
        while n <= self.max {
            out.push(n);
            n *= 2;
        }
        out
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or("expected NMIN:NMAX")?;
        let min: usize = a.trim().parse().map_err(|_| format!("bad NMIN {a:?}"))?;
        let max: usize = b.trim().parse().map_err(|_| format!("bad NMAX {b:?}"))?;
        if min == 0 || min > max {
            return Err(format!("need 1 <= NMIN <= NMAX, got {min}:{max}"));
        }
        Ok(Self { min, max })
    }
}

impl Serialize for Sweep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}:{}", self.min, self.max))
    }
}

fn parse_tuple<const K: usize>(s: &str) -> Result<[f64; K], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != K {
        return Err(format!("expected {K} comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; K];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| format!("bad number {p:?}"))?;
    }
    Ok(out)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    parse_tuple::<2>(s)
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    parse_tuple::<3>(s)
}

#[derive(Args, Debug, Serialize)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub order: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long)]
    pub half_width: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["signal", "signal_file"])))]
#[command(group(clap::ArgGroup::new("mode").required(true).multiple(true).args(["points", "sweep"])))]
pub struct LineDiffArgs {
    /// Catalog name.
    #[arg(long)]
    pub signal: Option<String>,
    /// JSON file `{"band": b, "coeffs": {"j": c}}`.
    #[arg(long)]
    pub signal_file: Option<PathBuf>,
    #[arg(long)]
    pub order: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: f64,
    /// Evaluation points; with `--sweep` the error is the maximum over them.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub points: Option<Vec<f64>>,
    #[arg(long)]
    pub sweep: Option<Sweep>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Truncation N when evaluating at points.
    #[arg(long, default_value_t = 1024)]
    pub half_width: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CircleRieszArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub point: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SphereMethod {
    Riesz,
    Boas,
}

#[derive(Args, Debug, Serialize)]
pub struct SphereLapArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    /// `THETA,PHI` in radians.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub point: [f64; 2],
    #[arg(long, value_enum, default_value = "riesz")]
    pub method: SphereMethod,
    #[arg(long, default_value_t = 1024)]
    pub half_width: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SphereCommutatorArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SmoothArgs {
    #[arg(long)]
    pub signal: String,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Probe count for the modulus of continuity.
    #[arg(long, default_value_t = 64)]
    pub probes: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SchrodingerArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long)]
    pub signal: String,
    #[arg(long)]
    pub half_width: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub points: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum FieldName {
    #[value(name = "X", alias = "x")]
    X,
    #[value(name = "Y", alias = "y")]
    Y,
    #[value(name = "T", alias = "t")]
    T,
}

#[derive(Args, Debug, Serialize)]
pub struct HeisenbergArgs {
    #[arg(long, value_enum)]
    pub field: FieldName,
    /// `x,y,t`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub point: [f64; 3],
    #[arg(long)]
    pub half_width: usize,
    /// Factor in x: `sinc-pulse`, `sinc-random` or a constant.
    #[arg(long, default_value = "sinc-pulse", allow_hyphen_values = true)]
    pub g: String,
    #[arg(long, default_value = "sinc-pulse", allow_hyphen_values = true)]
    pub h: String,
    #[arg(long, default_value = "sinc-pulse", allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Also check `[X, Y] = T` by nested Boas series of this half-width.
    #[arg(long)]
    pub commutator: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMethod {
    Boas,
    Fd2,
    Fd4,
}

#[derive(Args, Debug, Serialize)]
pub struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "boas,fd2,fd4")]
    pub methods: Vec<BenchMethod>,
    #[arg(long)]
    pub signal: String,
    #[arg(long)]
    pub sweep: Sweep,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.3")]
    pub points: Vec<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`. Returns the process exit code: 0 on success, 2 on usage
/// errors, 1 on failed validation.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let start = Instant::now();
    match commands::execute(&cli.command) {
        Ok(mut report) => {
            report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            match report.write(cli.format, out) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    1
                }
            }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
