//! Command-line driver: every check and sweep as a subcommand with JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qorbit_core::{Complex64, QorbitError};
use serde::{Serialize, Serializer};

pub use commands::random_lattice;
pub use output::{Report, Status};

/// A complex number given as "re" or "re,im".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cplx(pub Complex64);

impl FromStr for Cplx {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
        match s.split_once(',') {
            Some((re, im)) => Ok(Cplx(Complex64::new(parse(re)?, parse(im)?))),
            None => Ok(Cplx(Complex64::new(parse(s)?, 0.0))),
        }
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

/// An inclusive linear range "start:end:count".
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:end:count, got {s:?}"));
        };
        let f = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
        let count = n.trim().parse::<usize>().map_err(|e| format!("bad count {n:?}: {e}"))?;
        Ok(Range { start: f(a)?, end: f(b)?, count })
    }
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n).map(|i| self.start + (self.end - self.start) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qorbit",
    version,
    about = "Checks, sweeps and kernels for U_q(sl(n+1)) orbits and their representations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write JSON (the default).
    #[arg(long, global = true, conflicts_with = "emit_csv")]
    pub json: bool,
    /// Write the result table as CSV instead of JSON.
    #[arg(long, global = true)]
    pub emit_csv: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact checks on the Heisenberg algebra and its Fock module.
    Heis(HeisArgs),
    /// Relations, involutions and the Φ identity of Func(X).
    Funcx(FuncxArgs),
    /// Moment map images on Π_ν or W.
    Moment(MomentArgs),
    /// Series label of the representation induced from (c0, d0, ν0).
    Classify(ParamArgs),
    /// Unitarity dichotomy over a (c0, ν0) grid.
    Sweep(SweepArgs),
    /// Degenerate su(2,1) case and lattice positivity scan.
    Degen(DegenArgs),
    /// Reproducing kernels and measures of the holomorphic realizations.
    Kernel(KernelArgs),
    /// Invariance of the integral on Func(X) under E, F, K.
    Integral(IntegralArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeisCheck {
    Relations,
    Confluence,
    Pbw,
    I0,
}

#[derive(Args, Debug, Serialize)]
pub struct HeisArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = HeisCheck::Relations)]
    pub check: HeisCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FuncxCheck {
    Phi,
    Relations,
    Star,
}

#[derive(Args, Debug, Serialize)]
pub struct FuncxArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Word length for the relation check.
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Option<Cplx>,
    #[arg(long, allow_hyphen_values = true)]
    pub d0: Option<Cplx>,
    #[arg(long, value_enum, default_value_t = FuncxCheck::Relations)]
    pub check: FuncxCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentCheck {
    Relations,
    Intertwining,
    Casimir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Pi,
    W,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Calibrated,
    Literal,
}

#[derive(Args, Debug, Serialize)]
pub struct MomentArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "0.8")]
    pub c0: Cplx,
    #[arg(long, allow_hyphen_values = true)]
    pub d0: Option<Cplx>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.3)]
    pub nu0: f64,
    /// W degree, or Π window half-width.
    #[arg(long, default_value_t = 12)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = Target::Pi)]
    pub target: Target,
    #[arg(long, value_enum, default_value_t = Variant::Calibrated)]
    pub variant: Variant,
    #[arg(long, value_enum, default_value_t = MomentCheck::Relations)]
    pub check: MomentCheck,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct ParamArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Cplx,
    /// Defaults to 1/c0.
    #[arg(long, allow_hyphen_values = true)]
    pub d0: Option<Cplx>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu0: f64,
    /// Window half-width for the Gram check.
    #[arg(long, default_value_t = 30)]
    pub truncation: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    /// JSON grid: {"q": .., "c0": [..] | {"start","end","count"}, "nu0": ..}.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "0.2:5:25")]
    pub c0_range: Range,
    #[arg(long, allow_hyphen_values = true, default_value = "-4:4:20")]
    pub nu0_range: Range,
    #[arg(long, default_value_t = 30)]
    pub truncation: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct DegenArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub c0: f64,
    #[arg(long)]
    pub d0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda2: f64,
    /// Lattice box |k_i| ≤ bound.
    #[arg(long, default_value_t = 6)]
    pub bound: i64,
    #[arg(long, default_value_t = 200)]
    pub max_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelCheck {
    Expand,
    Psd,
    Reproduce,
}

#[derive(Args, Debug, Serialize)]
pub struct KernelArgs {
    #[arg(long)]
    pub q: f64,
    /// Spin of the holomorphic discrete series kernel.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha")]
    pub l: Option<f64>,
    /// Real part of the strange series spin.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = KernelCheck::Expand)]
    pub check: KernelCheck,
    /// Highest coefficient (default 20) or monomial degree (default 10).
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub sets: usize,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct IntegralArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Cplx,
    #[arg(long, allow_hyphen_values = true)]
    pub d0: Option<Cplx>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu0: f64,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Support |j| ≤ support on the lattice, |k| ≤ 2 in ζ.
    #[arg(long, default_value_t = 3)]
    pub support: i64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

/// Exit code and the two output streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_code(e: &QorbitError) -> i32 {
    match e {
        QorbitError::Parameter(_)
        | QorbitError::Domain(_)
        | QorbitError::Parse { .. }
        | QorbitError::UnsupportedRank { .. }
        | QorbitError::Unsupported(_) => 2,
        _ => 1,
    }
}

fn threads() -> Result<usize, String> {
    match std::env::var("QORBIT_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|e| format!("QORBIT_THREADS={v:?}: {e}")),
        Err(_) => Ok(0),
    }
}

/// Parses `args` (program name first) and runs the selected command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let n = match threads() {
        Ok(n) => n,
        Err(msg) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    match pool.install(|| commands::dispatch(&cli.command)) {
        Ok(report) => {
            let stdout = if cli.emit_csv { report.to_csv() } else { report.to_json() };
            Outcome { code: report.status.exit_code(), stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: error_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
