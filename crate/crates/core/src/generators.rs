//! Built-in generators.
//!
//! All of them are strictly increasing continuous bijections onto an interval
//! and ship closed-form inverses. [`make_monotone`] wraps an arbitrary
//! increasing function and inverts it by bisection.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::traits::{One, Pow};
use num::{BigInt, BigRational};

use crate::arithmetic::{Generator, Interval};
use crate::cantor;
use crate::error::{Error, Result};

/// Tail offset of the Fig. 1 generator, `f(x) = x - 162/25` for `x >= 10`.
///
/// This is the value that makes the generator continuous at `x = 10`, where
/// the transition cubic equals `264/75`.
pub const FIG1_TAIL_OFFSET: f64 = 6.48;

/// `f(10)` of the Fig. 1 generator.
pub const FIG1_KNEE: f64 = 3.52;

pub const BISECTION_TOL: f64 = 1e-14;
pub const BISECTION_MAX_ITER: usize = 200;

pub type MonotoneFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub(crate) enum Kind {
    Identity,
    Power { q: f64 },
    Linear { p: f64 },
    Fig1,
    Renyi { c: f64, d: f64 },
    Cantor { digits: u32 },
    Monotone { forward: MonotoneFn, domain: Interval, codomain: Interval },
}

fn sign_pow(x: f64, q: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(q)
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fig1_forward(x: f64) -> f64 {
    if x <= 1.0 {
        x
    } else if x <= 10.0 {
        let u = x - 6.0;
        (u * u * u + 200.0) / 75.0
    } else {
        x - FIG1_TAIL_OFFSET
    }
}

fn fig1_inverse(z: f64) -> f64 {
    if z <= 1.0 {
        z
    } else if z <= FIG1_KNEE {
        6.0 + (75.0 * z - 200.0).cbrt()
    } else {
        z + FIG1_TAIL_OFFSET
    }
}

/// Exact value of the Fig. 1 generator at a rational point.
pub fn fig1_forward_exact(x: &BigRational) -> BigRational {
    if *x <= BigRational::one() {
        x.clone()
    } else if *x <= rat(10, 1) {
        fig1_cubic_exact(x)
    } else {
        x - rat(162, 25)
    }
}

/// The transition piece `((x - 6)^3 + 200) / 75`.
pub fn fig1_cubic_exact(x: &BigRational) -> BigRational {
    let u = x - rat(6, 1);
    (&u * &u * &u + rat(200, 1)) / rat(75, 1)
}

/// Rational cube root, if one exists.
fn exact_cbrt(z: &BigRational) -> Option<BigRational> {
    let n = z.numer();
    let d = z.denom();
    let rn = n.cbrt();
    let rd = d.cbrt();
    if &(&rn * &rn * &rn) == n && &(&rd * &rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

fn fig1_inverse_exact(z: &BigRational) -> Result<BigRational> {
    if *z <= BigRational::one() {
        Ok(z.clone())
    } else if *z <= rat(264, 75) {
        let inner = rat(75, 1) * z - rat(200, 1);
        exact_cbrt(&inner)
            .map(|r| r + rat(6, 1))
            .ok_or_else(|| Error::Inexact(format!("fig1 inverse of {z} is irrational")))
    } else {
        Ok(z + rat(162, 25))
    }
}

fn bisect_inverse(forward: &MonotoneFn, domain: &Interval, y: f64) -> Result<f64> {
    let mut lo = if domain.lo.is_finite() { domain.lo } else { -1.0 };
    let mut hi = if domain.hi.is_finite() { domain.hi } else { 1.0 };
    // widen infinite ends until the bracket holds y
    while !domain.lo.is_finite() && forward(lo) > y {
        lo *= 2.0;
        if !lo.is_finite() {
            return Err(Error::domain(format_args!("no preimage for {y}")));
        }
    }
    while !domain.hi.is_finite() && forward(hi) < y {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::domain(format_args!("no preimage for {y}")));
        }
    }
    if forward(lo) > y || forward(hi) < y {
        return Err(Error::domain(format_args!("no preimage for {y} in {domain}")));
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECTION_TOL * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if forward(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence(format!(
        "bisection for {y} did not reach {BISECTION_TOL} in {BISECTION_MAX_ITER} steps"
    )))
}

impl Kind {
    pub(crate) fn codomain(&self) -> Interval {
        match self {
            Kind::Renyi { d, .. } => {
                let bound = -1.0 / d;
                if *d > 0.0 {
                    Interval::open(bound, f64::INFINITY)
                } else {
                    Interval::open(f64::NEG_INFINITY, bound)
                }
            }
            Kind::Monotone { codomain, .. } => *codomain,
            _ => Interval::REAL,
        }
    }

    pub(crate) fn is_exact(&self) -> bool {
        matches!(self, Kind::Identity | Kind::Linear { .. } | Kind::Cantor { .. })
    }

    pub(crate) fn is_normalized(&self) -> bool {
        match self {
            Kind::Linear { p } => *p == 1.0,
            _ => true,
        }
    }

    pub(crate) fn forward(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Kind::Identity => x,
            Kind::Power { q } => {
                if *q == 1.0 {
                    x
                } else if *q == 3.0 {
                    x * x * x
                } else {
                    sign_pow(x, *q)
                }
            }
            Kind::Linear { p } => p * x,
            Kind::Fig1 => fig1_forward(x),
            Kind::Renyi { c, d, .. } => (c * x * std::f64::consts::LN_2).exp_m1() / d,
            Kind::Cantor { digits } => cantor::staircase_f64(x, *digits),
            Kind::Monotone { forward, domain, .. } => {
                if !domain.contains(x) {
                    return Err(Error::domain(format_args!("{x} is outside the domain {domain}")));
                }
                forward(x)
            }
        })
    }

    pub(crate) fn inverse(&self, y: f64) -> Result<f64> {
        Ok(match self {
            Kind::Identity => y,
            Kind::Power { q } => {
                if *q == 1.0 {
                    y
                } else if *q == 3.0 {
                    y.cbrt()
                } else {
                    sign_pow(y, 1.0 / q)
                }
            }
            Kind::Linear { p } => y / p,
            Kind::Fig1 => fig1_inverse(y),
            Kind::Renyi { c, d, .. } => (d * y).ln_1p() / (c * std::f64::consts::LN_2),
            Kind::Cantor { .. } => cantor::inverse_f64(y)?,
            Kind::Monotone { forward, domain, .. } => bisect_inverse(forward, domain, y)?,
        })
    }

    pub(crate) fn forward_exact(&self, x: &BigRational) -> Result<BigRational> {
        match self {
            Kind::Identity => Ok(x.clone()),
            Kind::Linear { p } => Ok(exact_f64(*p)? * x),
            Kind::Fig1 => Ok(fig1_forward_exact(x)),
            Kind::Power { q } if q.fract() == 0.0 && *q > 0.0 && *q <= 64.0 => {
                Ok(Pow::pow(x, *q as u32))
            }
            Kind::Cantor { .. } => cantor::cantor_forward_rational(x),
            _ => Err(Error::Inexact("generator has no exact forward map".into())),
        }
    }

    pub(crate) fn inverse_exact(&self, y: &BigRational) -> Result<BigRational> {
        match self {
            Kind::Identity => Ok(y.clone()),
            Kind::Linear { p } => Ok(y / exact_f64(*p)?),
            Kind::Fig1 => fig1_inverse_exact(y),
            Kind::Cantor { .. } => Ok(cantor::cantor_inverse(y)?.value()),
            _ => Err(Error::Inexact("generator has no exact inverse map".into())),
        }
    }
}

fn exact_f64(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::Parameter(format!("{v} is not finite")))
}

/// `f(x) = x`.
pub fn make_identity() -> Generator {
    Generator::new("id", Kind::Identity)
}

/// Sign-preserving power `f(x) = sgn(x) |x|^q`.
pub fn make_power(q: f64) -> Result<Generator> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Parameter(format!("power exponent must be positive, got {q}")));
    }
    Ok(Generator::new(format!("power:q={q}"), Kind::Power { q }))
}

/// Rescaled multiplication `f(x) = p x`. Not normalized unless `p = 1`.
pub fn make_linear(p: f64) -> Result<Generator> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Parameter(format!("linear slope must be positive, got {p}")));
    }
    Ok(Generator::new(format!("linear:p={p}"), Kind::Linear { p }))
}

/// The interpolating generator of the correspondence-principle figure:
/// identity up to 1, the cubic `((x-6)^3 + 200)/75` up to 10, and a shifted
/// identity `x - 162/25` afterwards.
pub fn make_fig1() -> Generator {
    Generator::new("fig1", Kind::Fig1)
}

/// `f(x) = (2^((1-q)x) - 1) / (2^(1-q) - 1)`.
pub fn make_renyi(q: f64) -> Result<Generator> {
    if q == 1.0 || !q.is_finite() {
        return Err(Error::Parameter(format!("Renyi order must differ from 1, got {q}")));
    }
    let c = 1.0 - q;
    let d = (c * std::f64::consts::LN_2).exp_m1();
    Ok(Generator::new(format!("renyi:q={q}"), Kind::Renyi { c, d }))
}

/// Wraps a strictly increasing continuous `forward` with image `codomain`.
/// The inverse is found by bisection.
pub fn make_monotone(
    name: impl Into<String>,
    forward: MonotoneFn,
    domain: Interval,
    codomain: Interval,
) -> Generator {
    Generator::new(name, Kind::Monotone { forward, domain, codomain })
}

/// Textual generator description, as accepted on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Identity,
    Power { q: f64 },
    Linear { p: f64 },
    Fig1,
    Renyi { q: f64 },
    Cantor { digits: u32 },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Generator> {
        match *self {
            GeneratorSpec::Identity => Ok(make_identity()),
            GeneratorSpec::Power { q } => make_power(q),
            GeneratorSpec::Linear { p } => make_linear(p),
            GeneratorSpec::Fig1 => Ok(make_fig1()),
            GeneratorSpec::Renyi { q } => make_renyi(q),
            GeneratorSpec::Cantor { digits } => cantor::make_cantor_generator(digits),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Identity => write!(f, "id"),
            GeneratorSpec::Power { q } => write!(f, "power:q={q}"),
            GeneratorSpec::Linear { p } => write!(f, "linear:p={p}"),
            GeneratorSpec::Fig1 => write!(f, "fig1"),
            GeneratorSpec::Renyi { q } => write!(f, "renyi:q={q}"),
            GeneratorSpec::Cantor { digits } => write!(f, "cantor:digits={digits}"),
        }
    }
}

fn param<T: FromStr>(rest: Option<&str>, key: &str, spec: &str) -> Result<T> {
    let bad = || Error::Parameter(format!("expected `{key}=<value>` in generator spec `{spec}`"));
    let (k, v) = rest.and_then(|r| r.split_once('=')).ok_or_else(bad)?;
    if k.trim() != key {
        return Err(bad());
    }
    v.trim().parse().map_err(|_| bad())
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let spec = match head.trim() {
            "id" | "identity" if rest.is_none() => GeneratorSpec::Identity,
            "fig1" if rest.is_none() => GeneratorSpec::Fig1,
            "power" => GeneratorSpec::Power { q: param(rest, "q", s)? },
            "linear" => GeneratorSpec::Linear { p: param(rest, "p", s)? },
            "renyi" => GeneratorSpec::Renyi { q: param(rest, "q", s)? },
            "cantor" => GeneratorSpec::Cantor {
                digits: match rest {
                    None => cantor::DEFAULT_DIGITS,
                    Some(_) => param(rest, "digits", s)?,
                },
            },
            _ => return Err(Error::Parameter(format!("unknown generator spec `{s}`"))),
        };
        // validate parameters up front
        spec.build()?;
        Ok(spec)
    }
}
