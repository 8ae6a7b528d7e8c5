//! The `ndcalc` command line: deterministic CSV/JSON datasets.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad configuration, 3 domain error
//! (including non-members of the Cantor line and bad normalization), 4
//! numerical failure (no convergence, precision limit, no exact path).

mod commands;
pub mod dataset;

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational, Zero};

use crate::error::Error;
pub use dataset::{Cell, Dataset};

#[derive(Debug, Parser)]
#[command(name = "ndcalc", version, about = "Datasets for generator-induced arithmetic and calculus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Generator spec: id, power:q=<f>, linear:p=<f>, fig1, renyi:q=<f>, cantor[:digits=<n>]
    #[arg(long = "gen")]
    pub generator: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Absolute quadrature tolerance
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Grid {
    /// Start of the grid (decimal or p/q)
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<String>,
    /// End of the grid (decimal or p/q)
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<String>,
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CantorOp {
    Fwd,
    Inv,
    Member,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// x, f(x), f^-1(x) on a uniform grid (default generator fig1)
    Table {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// x, exp(x), exp_f(x) on a uniform grid (default generator fig1)
    Exp {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Oscillator phase-space trajectory t, x(t), v(t)
    Osc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value = "1")]
        omega: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c1: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c2: String,
    },
    /// Rotations of (r, 0) for several radii (default generator cantor)
    Circle {
        #[command(flatten)]
        common: Common,
        /// Number of radii
        #[arg(long, default_value_t = 10)]
        radii: usize,
        /// Largest radius, as a Y-side value
        #[arg(long, default_value = "1")]
        rmax: String,
        /// Angles per circle
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Boosts of (x0, x1) over a rapidity grid, or at one rapidity
    Boost {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        x1: String,
    },
    /// Oscillator energies E_0 .. E_n
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Sets alpha to this value and beta to 1
        #[arg(long, conflicts_with_all = ["alpha", "beta"])]
        alpha_beta: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 9)]
        n: u32,
    },
    /// f-entropy of an escort probability vector
    Entropy {
        #[command(flatten)]
        common: Common,
        /// Comma-separated escort probabilities (decimal or p/q)
        #[arg(long)]
        escort: String,
    },
    /// Local-hidden-variable maximum and the bound f^-1(2)
    Chsh {
        #[command(flatten)]
        common: Common,
    },
    /// Exact Cantor-line map on p/q rationals
    Cantor {
        op: CantorOp,
        /// Rationals as p/q or decimals; put negative values after `--`
        #[arg(required = true)]
        values: Vec<String>,
        /// Emit a JSON dataset instead of one value per line
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Lib(e) => match e {
                Error::Parameter(_) => 2,
                Error::Domain(_)
                | Error::DivisionByZero
                | Error::NotInCantorSet(_)
                | Error::Normalization(_) => 3,
                Error::Precision(_) | Error::Convergence(_) | Error::Inexact(_) => 4,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `p/q`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(s: &str) -> CliResult<BigRational> {
    let bad = || CliError::Config(format!("cannot parse {s:?} as a number"));
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(CliError::Config(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all = format!("{int}{frac}");
    let n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    let scale = exp - frac.len() as i32;
    if scale.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(n);
    if scale >= 0 {
        r *= BigRational::from_integer(num::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Parses a number to `f64` via its exact value (correct rounding).
pub fn parse_f64(s: &str) -> CliResult<f64> {
    use num::ToPrimitive;
    let r = parse_rational(s)?;
    r.to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Config(format!("{s:?} is out of range")))
}

pub(crate) enum Output {
    Data(Dataset, Format),
    Lines(Vec<String>),
}

fn emit(out: &Output, path: Option<&PathBuf>) -> CliResult<()> {
    let mut w: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match out {
        Output::Data(d, Format::Csv) => d.write_csv(&mut w)?,
        Output::Data(d, Format::Json) => d.write_json(&mut w)?,
        Output::Lines(lines) => {
            for l in lines {
                writeln!(w, "{l}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = commands::execute(&cli.command).and_then(|(out, path)| emit(&out, path.as_ref()));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let echo: Vec<String> =
                args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
            eprintln!("ndcalc: {e}");
            eprintln!("ndcalc: input: {}", echo.join(" "));
            e.exit_code()
        }
    }
}
