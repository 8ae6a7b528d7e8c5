//! Generator-induced arithmetic.
//!
//! A [`Generator`] is a strictly increasing bijection `f: X -> Y` onto a real
//! interval. It transports the ordinary field operations of `Y` back to `X`:
//!
//! ```text
//! x (+) y = f^-1(f(x) + f(y))      x (-) y = f^-1(f(x) - f(y))
//! x (*) y = f^-1(f(x) * f(y))      x (/) y = f^-1(f(x) / f(y))
//! ```
//!
//! Every operation exists on two evaluation paths selected by the value type:
//! `f64` (float path) and [`BigRational`] (exact path, only for generators that
//! report [`Generator::is_exact`]). Both are reached through the [`Scalar`]
//! trait so that higher modules can be written once.

use std::fmt;

use num::traits::{FromPrimitive, Signed, ToPrimitive};
use num::BigRational;

use crate::error::{Error, Result};
use crate::generators::Kind;

/// A real interval with independently open or closed ends.
///
/// Infinite ends are always treated as open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn is_real_line(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    pub fn contains(&self, y: f64) -> bool {
        if y.is_nan() {
            return false;
        }
        let above = if self.lo_closed { y >= self.lo } else { y > self.lo };
        let below = if self.hi_closed { y <= self.hi } else { y < self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// A bijection `f: X -> Y` defining one arithmetic.
///
/// Generators are immutable and cheap to clone; the custom variant shares its
/// closure through an `Arc`.
#[derive(Clone)]
pub struct Generator {
    pub(crate) name: String,
    pub(crate) kind: Kind,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("name", &self.name)
            .field("codomain", &self.codomain())
            .field("exact", &self.is_exact())
            .finish()
    }
}

impl Generator {
    pub(crate) fn new(name: impl Into<String>, kind: Kind) -> Self {
        Generator { name: name.into(), kind }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The image `Y = f(X)`.
    pub fn codomain(&self) -> Interval {
        self.kind.codomain()
    }

    /// True when both directions can be evaluated on rationals without rounding.
    pub fn is_exact(&self) -> bool {
        self.kind.is_exact()
    }

    /// True when `f(1) = 1`. Only the linear generator with `p != 1` is not.
    pub fn is_normalized(&self) -> bool {
        self.kind.is_normalized()
    }

    /// `f(x)` on the float path.
    pub fn forward(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain(format_args!("{} forward of non-finite {x}", self.name)));
        }
        let y = self.kind.forward(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::domain(format_args!("{} forward of {x} overflowed", self.name)))
        }
    }

    /// `f^-1(y)` on the float path. Fails when `y` is outside the codomain.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !self.codomain().contains(y) {
            return Err(Error::domain(format_args!(
                "{y} is outside the codomain {} of {}",
                self.codomain(),
                self.name
            )));
        }
        let x = self.kind.inverse(y)?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::domain(format_args!("{} inverse of {y} overflowed", self.name)))
        }
    }

    /// `f(x)` on the exact path.
    pub fn forward_exact(&self, x: &BigRational) -> Result<BigRational> {
        self.kind.forward_exact(x)
    }

    /// `f^-1(y)` on the exact path.
    pub fn inverse_exact(&self, y: &BigRational) -> Result<BigRational> {
        self.kind.inverse_exact(y)
    }

    /// Image of `x` in `Y`, on whichever path `S` selects.
    pub fn to_y<S: Scalar>(&self, x: &S) -> Result<S> {
        S::forward(self, x)
    }

    /// Pullback of `y` to `X`, on whichever path `S` selects.
    pub fn from_y<S: Scalar>(&self, y: &S) -> Result<S> {
        S::inverse(self, y)
    }

    pub fn add<S: Scalar>(&self, x: S, y: S) -> Result<S> {
        binary(self, Op::Add, x, y)
    }

    pub fn sub<S: Scalar>(&self, x: S, y: S) -> Result<S> {
        binary(self, Op::Sub, x, y)
    }

    pub fn mul<S: Scalar>(&self, x: S, y: S) -> Result<S> {
        binary(self, Op::Mul, x, y)
    }

    pub fn div<S: Scalar>(&self, x: S, y: S) -> Result<S> {
        binary(self, Op::Div, x, y)
    }

    pub fn neg<S: Scalar>(&self, x: S) -> Result<S> {
        neg(self, x)
    }

    pub fn opow<S: Scalar>(&self, x: S, n: u32) -> Result<S> {
        opow(self, x, n)
    }

    /// The X-side zero, `f^-1(0)`.
    pub fn zero<S: Scalar>(&self) -> Result<S> {
        self.from_y(&S::zero())
    }

    /// The X-side unit, `f^-1(1)`. Equals 1 for normalized generators.
    pub fn one<S: Scalar>(&self) -> Result<S> {
        self.from_y(&S::one())
    }

    /// Passes `y` through if it lies in the codomain. Fused Y-side evaluations
    /// call this on every intermediate that the compositional form would
    /// have pulled back, so both fail on the same inputs.
    pub fn check_y<S: Scalar>(&self, y: S) -> Result<S> {
        let dom = self.codomain();
        if dom.is_real_line() || dom.contains(y.approx()) {
            Ok(y)
        } else {
            Err(Error::domain(format_args!(
                "Y-side value {y:?} is outside the codomain {dom} of {}",
                self.name
            )))
        }
    }

    /// X-side absolute value `max(v, (-)v)`.
    pub fn abs<S: Scalar>(&self, v: S) -> Result<S> {
        let y = self.to_y(&v)?;
        if y.is_negative() {
            self.from_y(&-y)
        } else {
            Ok(v)
        }
    }
}

/// A value type that can be pushed through a generator.
///
/// Implemented for `f64` (float path) and [`BigRational`] (exact path).
pub trait Scalar: Clone + PartialOrd + fmt::Debug + Signed + FromPrimitive {
    /// True for types that represent their values without rounding.
    const EXACT: bool;

    /// Nearest float, for range checks and reporting.
    fn approx(&self) -> f64;

    fn forward(g: &Generator, x: &Self) -> Result<Self>;
    fn inverse(g: &Generator, y: &Self) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn approx(&self) -> f64 {
        *self
    }

    fn forward(g: &Generator, x: &f64) -> Result<f64> {
        g.forward(*x)
    }

    fn inverse(g: &Generator, y: &f64) -> Result<f64> {
        g.inverse(*y)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn forward(g: &Generator, x: &BigRational) -> Result<BigRational> {
        g.forward_exact(x)
    }

    fn inverse(g: &Generator, y: &BigRational) -> Result<BigRational> {
        g.inverse_exact(y)
    }
}

/// One of the four induced operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// `f^-1(f(x) op f(y))`.
pub fn binary<S: Scalar>(g: &Generator, op: Op, x: S, y: S) -> Result<S> {
    let fx = g.to_y(&x)?;
    let fy = g.to_y(&y)?;
    let z = match op {
        Op::Add => fx + fy,
        Op::Sub => fx - fy,
        Op::Mul => fx * fy,
        Op::Div => {
            // f(y) = 0 iff y is the X-side zero
            if fy.is_zero() {
                return Err(Error::DivisionByZero);
            }
            fx / fy
        }
    };
    g.from_y(&z)
}

/// `0 (-) x = f^-1(-f(x))`.
pub fn neg<S: Scalar>(g: &Generator, x: S) -> Result<S> {
    let fx = g.to_y(&x)?;
    g.from_y(&-fx)
}

/// `x^(*n) = f^-1(f(x)^n)`, with `x^(*0) = f^-1(1)`.
pub fn opow<S: Scalar>(g: &Generator, x: S, n: u32) -> Result<S> {
    let fx = g.to_y(&x)?;
    g.from_y(&num::pow(fx, n as usize))
}

/// `|f(lambda * x) / lambda - x|`, which vanishes as `lambda -> inf` for
/// generators obeying the correspondence principle.
pub fn correspondence_defect(g: &Generator, x: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    let fx = g.forward(lambda * x)?;
    Ok((fx / lambda - x).abs())
}
