//! Worked physical systems in a non-Diophantine arithmetic: the classical
//! oscillator, plane rotations, 1+1 boosts and the quantum oscillator.
//!
//! Formulas are evaluated as a single Y-side expression followed by one
//! `f^-1`, which equals the left-to-right composition of X-side operations.
//! Every intermediate the composition would have pulled back is still checked
//! against the codomain.

use std::f64::consts::PI;

use crate::arithmetic::{Generator, Scalar};
use crate::calculus::{nd_integrate, NDFunction, ToleranceConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
}

impl OscillatorParams {
    pub fn new(omega: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::Parameter(format!("omega must be positive, got {omega}")));
        }
        Ok(OscillatorParams { omega, c1, c2 })
    }
}

/// Time-like and space-like components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoVector {
    pub x0: f64,
    pub x1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QhoParams<S = f64> {
    pub alpha: S,
    pub beta: S,
    pub n: u32,
}

impl<S: Scalar> QhoParams<S> {
    pub fn new(alpha: S, beta: S, n: u32) -> Result<Self> {
        if !(alpha > S::zero() && beta > S::zero()) {
            return Err(Error::Parameter(format!(
                "alpha and beta must be positive, got {alpha:?}, {beta:?}"
            )));
        }
        Ok(QhoParams { alpha, beta, n })
    }
}

/// `x(t) = C1 (*) sin_f(w (*) t) (+) C2 (*) cos_f(w (*) t)` and its f-derivative
/// `v(t) = w (*) C1 (*) cos_f(w (*) t) (-) w (*) C2 (*) sin_f(w (*) t)`.
pub fn oscillator_state(g: &Generator, p: &OscillatorParams, t: f64) -> Result<(f64, f64)> {
    let w = g.forward(p.omega)?;
    let (a, b) = (g.forward(p.c1)?, g.forward(p.c2)?);
    let theta = g.check_y(w * g.forward(t)?)?;
    let (s, c) = (g.check_y(theta.sin())?, g.check_y(theta.cos())?);
    let x = g.check_y(a * s)? + g.check_y(b * c)?;
    let v = g.check_y(w * a * c)? - g.check_y(w * b * s)?;
    Ok((g.inverse(g.check_y(x)?)?, g.inverse(g.check_y(v)?)?))
}

/// Y-side image of `v^(*2) (+) w^(*2) (*) x^(*2)`, constant along a trajectory.
pub fn oscillator_energy_y(g: &Generator, omega: f64, x: f64, v: f64) -> Result<f64> {
    let (w, xy, vy) = (g.forward(omega)?, g.forward(x)?, g.forward(v)?);
    Ok(vy * vy + w * w * xy * xy)
}

/// `x' = x (*) cos_f a (+) y (*) sin_f a`, `y' = y (*) cos_f a (-) x (*) sin_f a`.
pub fn rotate(g: &Generator, v: (f64, f64), alpha: f64) -> Result<(f64, f64)> {
    let a = g.forward(alpha)?;
    let (s, c) = (g.check_y(a.sin())?, g.check_y(a.cos())?);
    let (x, y) = (g.forward(v.0)?, g.forward(v.1)?);
    let xp = g.check_y(x * c)? + g.check_y(y * s)?;
    let yp = g.check_y(y * c)? - g.check_y(x * s)?;
    Ok((g.inverse(xp)?, g.inverse(yp)?))
}

/// `x'0 = x0 (*) cosh_f a (-) x1 (*) sinh_f a`, `x'1 = x1 (*) cosh_f a (-) x0 (*) sinh_f a`.
pub fn boost(g: &Generator, v: TwoVector, alpha: f64) -> Result<TwoVector> {
    let a = g.forward(alpha)?;
    let (sh, ch) = (g.check_y(a.sinh())?, g.check_y(a.cosh())?);
    let (x0, x1) = (g.forward(v.x0)?, g.forward(v.x1)?);
    let y0 = g.check_y(x0 * ch)? - g.check_y(x1 * sh)?;
    let y1 = g.check_y(x1 * ch)? - g.check_y(x0 * sh)?;
    Ok(TwoVector { x0: g.inverse(y0)?, x1: g.inverse(y1)? })
}

/// `beta = tanh_f alpha`.
pub fn velocity_of_rapidity(g: &Generator, alpha: f64) -> Result<f64> {
    let a = g.forward(alpha)?;
    g.inverse(a.tanh())
}

/// `ln(1 - |tanh f(alpha)|)`, the log of the Y-side distance to the speed of
/// light. It stays finite (and negative) long after `tanh` itself has rounded
/// to 1, so it certifies `|beta| < f^-1(1)` for large rapidities.
pub fn speed_gap_ln(g: &Generator, alpha: f64) -> Result<f64> {
    let a = g.forward(alpha)?.abs();
    // 1 - tanh a = 2 / (e^{2a} + 1)
    Ok(std::f64::consts::LN_2 - 2.0 * a - (-2.0 * a).exp().ln_1p())
}

/// `x0^(*2) (-) x1^(*2) [(-) x2^(*2) (-) x3^(*2)]`, folded from the left.
pub fn minkowski_norm_sq<S: Scalar>(g: &Generator, components: &[S]) -> Result<S> {
    if components.len() != 2 && components.len() != 4 {
        return Err(Error::Parameter(format!(
            "expected 2 or 4 components, got {}",
            components.len()
        )));
    }
    let ys = components.iter().map(|c| g.to_y(c)).collect::<Result<Vec<S>>>()?;
    let mut acc = g.check_y(ys[0].clone() * ys[0].clone())?;
    for y in &ys[1..] {
        acc = g.check_y(acc - g.check_y(y.clone() * y.clone())?)?;
    }
    g.from_y(&acc)
}

/// `E_n = f^-1(f(alpha) f(beta) (2n + 1))`.
pub fn qho_energy<S: Scalar>(g: &Generator, q: &QhoParams<S>) -> Result<S> {
    let ab = g.to_y(&q.alpha)? * g.to_y(&q.beta)?;
    let k = S::from_u32(2 * q.n + 1).expect("small integers are representable");
    g.from_y(&g.check_y(ab * k)?)
}

/// Y-side ground state `(B / (pi A))^(1/4) exp(-B y^2 / (2A))`.
fn ground_y(a: f64, b: f64, y: f64) -> f64 {
    (b / (PI * a)).powf(0.25) * (-b * y * y / (2.0 * a)).exp()
}

fn ab(g: &Generator, q: &QhoParams) -> Result<(f64, f64)> {
    let (a, b) = (g.forward(q.alpha)?, g.forward(q.beta)?);
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format_args!("f(alpha) = {a} and f(beta) = {b} must be positive")));
    }
    Ok((a, b))
}

/// `psi_0f(x) = f^-1((f(b) / (pi f(a)))^(1/4) exp(-f(b) f(x)^2 / (2 f(a))))`.
pub fn qho_ground_state(g: &Generator, q: &QhoParams, x: f64) -> Result<f64> {
    let (a, b) = ab(g, q)?;
    let y = g.forward(x)?;
    g.inverse(ground_y(a, b, y))
}

/// `int |psi_0f|^(*2) (*) d_f x` over the f-interval whose Y-side image is
/// `|y| <= cutoff sqrt(f(a) / f(b))`.
pub fn qho_norm(g: &Generator, q: &QhoParams, cutoff: f64, cfg: &ToleranceConfig) -> Result<f64> {
    if !(cutoff > 0.0) {
        return Err(Error::Parameter(format!("cutoff must be positive, got {cutoff}")));
    }
    let (a, b) = ab(g, q)?;
    let half = cutoff * (a / b).sqrt();
    let density = NDFunction::conjugate(move |y| ground_y(a, b, y).powi(2));
    nd_integrate(g, &density, g.inverse(-half)?, g.inverse(half)?, cfg)
}

/// Largest pointwise residual of `-A^2 psi'' + B^2 y^2 psi = f(E_0) psi` for the
/// Y-side ground state, using second differences on `points` nodes over
/// `|y| <= cutoff sqrt(A / B)`, relative to `max |f(E_0) psi|`.
pub fn qho_eigen_residual(g: &Generator, q: &QhoParams, points: usize, cutoff: f64) -> Result<f64> {
    if points < 3 {
        return Err(Error::Parameter(format!("need at least 3 grid points, got {points}")));
    }
    let (a, b) = ab(g, q)?;
    let e0 = g.forward(qho_energy(g, &QhoParams { n: 0, ..q.clone() })?)?;
    let half = cutoff * (a / b).sqrt();
    let h = 2.0 * half / (points - 1) as f64;
    let psi: Vec<f64> = (0..points).map(|j| ground_y(a, b, -half + j as f64 * h)).collect();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for j in 1..points - 1 {
        let y = -half + j as f64 * h;
        let d2 = (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) / (h * h);
        let lhs = -a * a * d2 + b * b * y * y * psi[j];
        worst = worst.max((lhs - e0 * psi[j]).abs());
        scale = scale.max((e0 * psi[j]).abs());
    }
    Ok(worst / scale)
}
