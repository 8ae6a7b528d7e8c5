//! The f-derivative, the f-integral and ⊕-power series.
//!
//! All limits are parametrized on the Y side: an X-side increment `h` is
//! written as `f^-1(eps)` and `eps -> 0`. This is the only parametrization that
//! makes sense for the Cantor line, and for continuous generators it is the
//! same limit.

use std::fmt;
use std::sync::Arc;

use num::traits::{ToPrimitive, Zero};
use num::BigRational;

use crate::arithmetic::Generator;
use crate::error::{Error, Result};
use crate::generators::Kind;

/// Numerical knobs for the calculus routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Initial Y-side step, relative to `max(1, |f(x)|)`.
    pub deriv_eps0: f64,
    pub deriv_levels: u32,
    /// Absolute tolerance of the Y-side quadrature.
    pub quad_tol: f64,
    pub quad_max_depth: u32,
    pub series_max_terms: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            deriv_eps0: 1e-4,
            deriv_levels: 4,
            quad_tol: 1e-10,
            quad_max_depth: 50,
            series_max_terms: 64,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.deriv_eps0 > 0.0
            && self.deriv_eps0.is_finite()
            && self.deriv_levels >= 1
            && self.quad_tol > 0.0
            && self.quad_max_depth >= 1
            && self.series_max_terms >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("invalid tolerance configuration {self:?}")))
        }
    }
}

pub type XFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;
pub type YFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    BlackBox(XFn),
    Conjugate { y: YFn, dy: Option<YFn> },
    Polynomial { exact: Vec<BigRational>, approx: Vec<f64> },
}

/// A map `X -> X`.
///
/// Either an opaque X-side evaluator, or the conjugate `f^-1 . F . f` of a
/// Y-side function `F` (optionally with its derivative), or the conjugate of a
/// Y-side polynomial with rational coefficients.
#[derive(Clone)]
pub struct NDFunction {
    repr: Repr,
}

impl fmt::Debug for NDFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::BlackBox(_) => f.write_str("NDFunction::BlackBox"),
            Repr::Conjugate { dy, .. } => {
                write!(f, "NDFunction::Conjugate {{ derivative: {} }}", dy.is_some())
            }
            Repr::Polynomial { exact, .. } => write!(f, "NDFunction::Polynomial({exact:?})"),
        }
    }
}

impl NDFunction {
    pub fn black_box(a: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        NDFunction { repr: Repr::BlackBox(Arc::new(a)) }
    }

    /// `F_f = f^-1 . F . f`.
    pub fn conjugate(y: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        NDFunction { repr: Repr::Conjugate { y: Arc::new(y), dy: None } }
    }

    /// Conjugate with a known `F'`, so that no finite differences are needed.
    pub fn conjugate_with_derivative(
        y: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dy: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        NDFunction { repr: Repr::Conjugate { y: Arc::new(y), dy: Some(Arc::new(dy)) } }
    }

    /// Conjugate of `F(y) = sum c_k y^k`.
    pub fn polynomial(coeffs: Vec<BigRational>) -> Self {
        let approx = coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        NDFunction { repr: Repr::Polynomial { exact: coeffs, approx } }
    }

    /// The constant function with Y-side value `c`.
    pub fn constant_y(c: BigRational) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn is_black_box(&self) -> bool {
        matches!(self.repr, Repr::BlackBox(_))
    }

    /// `A(x)`.
    pub fn eval(&self, g: &Generator, x: f64) -> Result<f64> {
        match &self.repr {
            Repr::BlackBox(a) => a(x),
            _ => {
                let y = g.forward(x)?;
                g.inverse(self.y_value(g, y)?)
            }
        }
    }

    /// The Y-side shadow `f(A(f^-1(y)))`.
    pub fn y_value(&self, g: &Generator, y: f64) -> Result<f64> {
        match &self.repr {
            Repr::BlackBox(a) => g.forward(a(g.inverse(y)?)?),
            Repr::Conjugate { y: f, .. } => finite(f(y), y),
            Repr::Polynomial { approx, .. } => finite(horner(approx, y), y),
        }
    }

    fn y_derivative(&self) -> Option<YFn> {
        match &self.repr {
            Repr::BlackBox(_) => None,
            Repr::Conjugate { dy, .. } => dy.clone(),
            Repr::Polynomial { approx, .. } => {
                let d: Vec<f64> =
                    approx.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
                Some(Arc::new(move |y| horner(&d, y)))
            }
        }
    }
}

fn finite(v: f64, y: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format_args!("Y-side function is not finite at {y}")))
    }
}

fn horner(c: &[f64], y: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * y + ck)
}

/// Richardson extrapolation of a central difference `q(h)` with error series
/// in even powers of `h`.
fn richardson(eps0: f64, levels: u32, mut q: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut prev: Vec<f64> = Vec::new();
    let mut last_diff = f64::INFINITY;
    let mut growth = 0;
    for k in 0..levels as usize {
        let h = eps0 * 0.5f64.powi(k as i32);
        let mut row = vec![q(h)?];
        let mut factor = 4.0;
        for m in 1..=k {
            let v = row[m - 1] + (row[m - 1] - prev[m - 1]) / (factor - 1.0);
            row.push(v);
            factor *= 4.0;
        }
        if k > 0 {
            let diff = (row[k] - prev[k - 1]).abs();
            let noise = 1e-9 * row[k].abs().max(1.0);
            if diff > last_diff && diff > noise {
                growth += 1;
                if growth >= 2 {
                    return Err(Error::Convergence(format!(
                        "Richardson estimates diverge (last change {diff:e})"
                    )));
                }
            } else {
                growth = 0;
            }
            last_diff = diff;
        }
        prev = row;
    }
    let v = prev[levels as usize - 1];
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Convergence("derivative estimate is not finite".into()))
    }
}

/// Y-side derivative of `G` at `y0`.
fn y_slope(
    g: &Generator,
    y0: f64,
    cfg: &ToleranceConfig,
    mut gy: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let eps0 = cfg.deriv_eps0 * y0.abs().max(1.0);
    let dom = g.codomain();
    richardson(eps0, cfg.deriv_levels, |h| {
        let (yp, ym) = (y0 + h, y0 - h);
        if !dom.contains(yp) || !dom.contains(ym) {
            return Err(Error::domain(format_args!(
                "step {h:e} around {y0} leaves the codomain {dom}"
            )));
        }
        Ok((gy(yp)? - gy(ym)?) / (yp - ym))
    })
}

/// `d_f A(x) / d_f x`.
///
/// Black-box functions go through the defining limit
/// `(A(x (+) h) (-) A(x)) (/) h` with `h = f^-1(+-eps)`, whose Y-side image is a
/// central difference of `f . A . f^-1`. Conjugate input uses `f^-1(F'(f(x)))`.
pub fn nd_derivative(g: &Generator, a: &NDFunction, x: f64, cfg: &ToleranceConfig) -> Result<f64> {
    cfg.validate()?;
    let y0 = g.forward(x)?;
    let slope = if let Some(dy) = a.y_derivative() {
        finite(dy(y0), y0)?
    } else {
        if a.is_black_box() && matches!(g.kind, Kind::Cantor { .. }) {
            return Err(Error::Convergence(
                "the X-side limit does not exist pointwise on the Cantor line; \
                 pass the function in conjugate form"
                    .into(),
            ));
        }
        y_slope(g, y0, cfg, |y| a.y_value(g, y))?
    };
    g.inverse(slope)
}

/// The f-derivative as a function in its own right.
pub fn derivative_fn(g: &Generator, a: &NDFunction, cfg: &ToleranceConfig) -> NDFunction {
    if let Some(dy) = a.y_derivative() {
        return NDFunction { repr: Repr::Conjugate { y: dy, dy: None } };
    }
    let (g, a, cfg) = (g.clone(), a.clone(), *cfg);
    NDFunction::black_box(move |x| nd_derivative(&g, &a, x, &cfg))
}

struct Simpson<'a, F> {
    f: &'a mut F,
    max_depth: u32,
}

impl<F: FnMut(f64) -> Result<f64>> Simpson<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn step(&mut self, a: f64, fa: f64, m: f64, fm: f64, b: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = ((self.f)(lm)?, (self.f)(rm)?);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
        if delta.abs() <= 15.0 * tol || delta.abs() <= floor {
            return Ok(left + right + delta / 15.0);
        }
        if depth >= self.max_depth || m == a || m == b {
            return Err(Error::Convergence(format!(
                "adaptive Simpson hit depth {depth} on [{a}, {b}]"
            )));
        }
        Ok(self.step(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)?
            + self.step(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)?)
    }
}

/// Adaptive Simpson quadrature of a real function to an absolute tolerance.
pub fn adaptive_simpson(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut s = Simpson { f: &mut f, max_depth };
    s.step(a, fa, m, fm, b, fb, whole, tol, 0)
}

/// `int_a^b A(x) (*) d_f x = f^-1( int_{f(a)}^{f(b)} f(A(f^-1(y))) dy )`.
pub fn nd_integrate(
    g: &Generator,
    a_fn: &NDFunction,
    a: f64,
    b: f64,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    cfg.validate()?;
    let (ya, yb) = (g.forward(a)?, g.forward(b)?);
    let v = adaptive_simpson(|y| a_fn.y_value(g, y), ya, yb, cfg.quad_tol, cfg.quad_max_depth)?;
    g.inverse(v)
}

/// Exact f-integral of a Y-side polynomial for generators with an exact path.
pub fn nd_integrate_exact(
    g: &Generator,
    coeffs: &[BigRational],
    a: &BigRational,
    b: &BigRational,
) -> Result<BigRational> {
    if !g.is_exact() {
        return Err(Error::Inexact(format!("{} has no exact evaluation path", g.name())));
    }
    let ya = g.forward_exact(a)?;
    let yb = g.forward_exact(b)?;
    let mut total = BigRational::zero();
    let (mut pa, mut pb) = (ya.clone(), yb.clone());
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            total += c * (&pb - &pa) / BigRational::from_integer((k as u64 + 1).into());
        }
        pa *= &ya;
        pb *= &yb;
    }
    g.inverse_exact(&total)
}

/// The partial sum `(+)_{k<=n} a_k (*) x^(*k)` with `a_k = f^-1(c_k)`, i.e.
/// `f^-1(sum_{k<=n} c_k f(x)^k)`. Terms beyond the supplied coefficients are 0.
pub fn series_eval(
    g: &Generator,
    coeffs_y: &[f64],
    x: f64,
    n: usize,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    if n > cfg.series_max_terms {
        return Err(Error::Parameter(format!(
            "{n} terms requested, limit is {}",
            cfg.series_max_terms
        )));
    }
    let y = g.forward(x)?;
    let c = &coeffs_y[..coeffs_y.len().min(n + 1)];
    let dom = g.codomain();
    let mut partial = 0.0;
    let mut pow = 1.0;
    for (k, ck) in c.iter().enumerate() {
        partial += ck * pow;
        if !dom.contains(partial) {
            return Err(Error::domain(format_args!(
                "partial sum through term {k} is {partial}, outside {dom}"
            )));
        }
        pow *= y;
    }
    g.inverse(horner(c, y))
}

/// `1/k!` for `k = 0..n`, the Y-side coefficients of `exp_f`.
pub fn exp_coefficients(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 1.0;
    for k in 0..n {
        if k > 0 {
            c /= k as f64;
        }
        out.push(c);
    }
    out
}
