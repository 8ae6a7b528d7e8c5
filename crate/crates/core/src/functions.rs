//! f-deformed special functions and f-complex numbers.
//!
//! Every special function is the conjugate `f^-1(std(f(x)))` of its ordinary
//! counterpart; no series are involved.

use std::fmt;
use std::str::FromStr;

use num::traits::{One, ToPrimitive, Zero};
use num::BigRational;

use crate::arithmetic::Generator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Special {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
}

impl Special {
    pub const ALL: [Special; 7] = [
        Special::Exp,
        Special::Ln,
        Special::Sin,
        Special::Cos,
        Special::Sinh,
        Special::Cosh,
        Special::Tanh,
    ];

    /// The ordinary function on the Y side.
    pub fn apply(self, y: f64) -> f64 {
        match self {
            Special::Exp => y.exp(),
            Special::Ln => y.ln(),
            Special::Sin => y.sin(),
            Special::Cos => y.cos(),
            Special::Sinh => y.sinh(),
            Special::Cosh => y.cosh(),
            Special::Tanh => y.tanh(),
        }
    }

    /// Y-side value when it is rational for a rational argument:
    /// `exp 0`, `cos 0`, `cosh 0` are 1, `sin 0`, `sinh 0`, `tanh 0`, `ln 1` are 0.
    fn apply_exact(self, y: &BigRational) -> Option<BigRational> {
        match self {
            Special::Exp | Special::Cos | Special::Cosh if y.is_zero() => Some(BigRational::one()),
            Special::Sin | Special::Sinh | Special::Tanh if y.is_zero() => Some(BigRational::zero()),
            Special::Ln if y.is_one() => Some(BigRational::zero()),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Special::Exp => "exp",
            Special::Ln => "ln",
            Special::Sin => "sin",
            Special::Cos => "cos",
            Special::Sinh => "sinh",
            Special::Cosh => "cosh",
            Special::Tanh => "tanh",
        }
    }
}

impl fmt::Display for Special {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Special {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Special::ALL
            .into_iter()
            .find(|sp| sp.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown special function {s:?}")))
    }
}

fn y_image(g: &Generator, name: Special, y: f64) -> Result<f64> {
    if name == Special::Ln && !(y > 0.0) {
        return Err(Error::domain(format_args!("ln of non-positive Y-side image {y}")));
    }
    let v = name.apply(y);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format_args!("{name}({y}) is not finite under {}", g.name())))
    }
}

/// `f^-1(name(f(x)))`.
pub fn special(g: &Generator, name: Special, x: f64) -> Result<f64> {
    let y = g.forward(x)?;
    g.inverse(y_image(g, name, y)?)
}

/// Result of a special function at a rational argument.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    /// Present when the result is an exact rational.
    pub exact: Option<BigRational>,
}

/// Special function at a rational point on an exact generator. The Y-side
/// value is transcendental except at a few points, so the result is usually the
/// float rounding of the true value, with `exact` left empty.
pub fn special_rational(g: &Generator, name: Special, x: &BigRational) -> Result<SpecialValue> {
    let y = g.forward_exact(x)?;
    if let Some(v) = name.apply_exact(&y) {
        let exact = g.inverse_exact(&v)?;
        let value = exact.to_f64().unwrap_or(f64::NAN);
        return Ok(SpecialValue { value, exact: Some(exact) });
    }
    let yf = y.to_f64().unwrap_or(f64::NAN);
    let value = g.inverse(y_image(g, name, yf)?)?;
    Ok(SpecialValue { value, exact: None })
}

/// A pair of X-values under one generator, read as `re + i im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FComplex {
    pub re: f64,
    pub im: f64,
}

impl FComplex {
    pub fn new(re: f64, im: f64) -> Self {
        FComplex { re, im }
    }

    /// `i = (0, 1)` in the generator's own zero and one.
    pub fn i(g: &Generator) -> Result<Self> {
        Ok(FComplex { re: g.zero()?, im: g.one()? })
    }
}

/// `(x, y) (+) (x', y') = (x (+) x', y (+) y')`.
pub fn cadd(g: &Generator, z1: FComplex, z2: FComplex) -> Result<FComplex> {
    Ok(FComplex { re: g.add(z1.re, z2.re)?, im: g.add(z1.im, z2.im)? })
}

/// `(x, y) (*) (x', y') = (x(*)x' (-) y(*)y', y(*)x' (+) x(*)y')`.
pub fn cmul(g: &Generator, z1: FComplex, z2: FComplex) -> Result<FComplex> {
    let (a, b) = (g.forward(z1.re)?, g.forward(z1.im)?);
    let (c, d) = (g.forward(z2.re)?, g.forward(z2.im)?);
    let re = g.check_y(g.check_y(a * c)? - g.check_y(b * d)?)?;
    let im = g.check_y(g.check_y(b * c)? + g.check_y(a * d)?)?;
    Ok(FComplex { re: g.inverse(re)?, im: g.inverse(im)? })
}

/// `(x, y)* = (x, (-)y)`.
pub fn conj(g: &Generator, z: FComplex) -> Result<FComplex> {
    Ok(FComplex { re: z.re, im: g.neg(z.im)? })
}

/// `|z|^(*2) = x^(*2) (+) y^(*2)`.
pub fn cmodulus_sq(g: &Generator, z: FComplex) -> Result<f64> {
    let (a, b) = (g.forward(z.re)?, g.forward(z.im)?);
    let s = g.check_y(a * a)? + g.check_y(b * b)?;
    g.inverse(s)
}
