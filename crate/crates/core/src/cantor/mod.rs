//! The Cantor-line bijection `f: C -> R`.
//!
//! On `[0, 1)` the inverse map reads the binary digits of `y`, doubles each
//! one and reads the result in base 3. Dyadic `y` have two binary expansions;
//! the smaller image is always the one coming from the expansion with a
//! repeated-1 tail, so the construction uses that form throughout. The map is
//! extended to all of `R` by `f(x + k) = f(x) + k` for integer `k`.
//!
//! Values are exact rationals. A rational's expansion is eventually periodic
//! and the digit maps preserve that, so nothing here rounds.

pub mod radix;

use num::traits::{ToPrimitive, Zero};
use num::{BigInt, BigRational, BigUint};

use crate::arithmetic::Generator;
use crate::error::{Error, Result};
use crate::generators::Kind;

pub use radix::{to_expansion, to_standard_expansion, RadixExpansion};

/// Default number of significant result digits on the float path.
pub const DEFAULT_DIGITS: u32 = 64;
pub const MIN_DIGITS: u32 = 16;
pub const MAX_DIGITS: u32 = 120;

/// `log_3 2`, the Hausdorff dimension of the middle-thirds set. A segment of
/// length `L` carries fractal measure `L^D`, which is not the f-integral.
pub const CANTOR_DIMENSION: f64 = 0.630_929_753_571_457_4;

/// A rational known to lie on the Cantor line, together with the ternary
/// expansion (digits in `{0, 2}`) that the construction assigns to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorValue {
    ternary: RadixExpansion,
}

impl CantorValue {
    /// Checks membership and captures the `{0, 2}` representative.
    pub fn from_rational(x: &BigRational) -> Result<Self> {
        let std = to_standard_expansion(x, 3)?;
        // triadic points belong to C only through their 2-tailed form
        let repr = std.to_non_terminating();
        if repr.digits().any(|d| d == 1) {
            return Err(Error::NotInCantorSet(x.to_string()));
        }
        Ok(CantorValue { ternary: repr })
    }

    pub fn expansion(&self) -> &RadixExpansion {
        &self.ternary
    }

    pub fn value(&self) -> BigRational {
        self.ternary.value()
    }

    /// `f(x)`.
    pub fn forward(&self) -> BigRational {
        halve(&self.ternary).value()
    }
}

fn double(binary: &RadixExpansion) -> RadixExpansion {
    binary.map_digits(3, |d| 2 * d).expect("doubled binary digits are ternary")
}

fn halve(ternary: &RadixExpansion) -> RadixExpansion {
    ternary.map_digits(2, |d| d / 2).expect("halved {0,2} digits are binary")
}

/// `f^-1(y)`.
pub fn cantor_inverse(y: &BigRational) -> Result<CantorValue> {
    let binary = to_expansion(y, 2)?;
    Ok(CantorValue { ternary: double(&binary) })
}

/// `f(x)` for a value already known to be on the line.
pub fn cantor_forward(x: &CantorValue) -> BigRational {
    x.forward()
}

/// `f(x)` for an arbitrary rational; fails off the Cantor line.
pub fn cantor_forward_rational(x: &BigRational) -> Result<BigRational> {
    Ok(CantorValue::from_rational(x)?.forward())
}

/// Membership in `C`, straight from the construction: some ternary
/// expansion of `x` uses only the digits 0 and 2, and mapping its halved
/// binary value back through `f^-1` lands on `x` again.
pub fn cantor_member(x: &BigRational) -> Result<bool> {
    let std = to_standard_expansion(x, 3)?;
    let alt = std.to_non_terminating();
    let mut candidates = vec![std];
    if alt != candidates[0] {
        candidates.push(alt);
    }
    for c in candidates {
        if c.digits().any(|d| d == 1) {
            continue;
        }
        // to_expansion(value, 2) of a minimal binary expansion is its
        // non-terminating form, so this is cantor_inverse(halved value)
        let y = halve(&c).to_non_terminating();
        if double(&y).value() == *x {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Wraps the bijection as a [`Generator`].
///
/// The exact path is the rational pipeline above. The float path treats an
/// `f64` as the dyadic rational it is: the inverse is computed exactly and
/// rounded once; the forward map reads `digits` significant ternary digits and
/// evaluates the Cantor staircase, which coincides with `f` on `C` and extends
/// it monotonically to the floats that only approximate points of `C`.
pub fn make_cantor_generator(digits: u32) -> Result<Generator> {
    if !(MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
        return Err(Error::Parameter(format!(
            "cantor digits must lie in {MIN_DIGITS}..={MAX_DIGITS}, got {digits}"
        )));
    }
    Ok(Generator::new("cantor", Kind::Cantor { digits }))
}

/// `frac = mant / 2^shift` with `mant` odd, for `0 < frac < 1`.
fn dyadic_parts(frac: f64) -> (u64, u32) {
    let bits = frac.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let (mut mant, mut e) = if exp == 0 {
        (bits & ((1 << 52) - 1), -1074)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
    };
    let tz = mant.trailing_zeros();
    mant >>= tz;
    e += tz as i32;
    debug_assert!(e < 0);
    (mant, (-e) as u32)
}

/// Ternary digits of `mant / 2^shift`, produced by exact long multiplication.
enum TernaryDigits {
    Small { r: u128, shift: u32 },
    Big { r: BigUint, shift: u32 },
}

impl TernaryDigits {
    fn new(mant: u64, shift: u32) -> Self {
        if shift <= 120 {
            TernaryDigits::Small { r: mant as u128, shift }
        } else {
            TernaryDigits::Big { r: BigUint::from(mant), shift }
        }
    }

    fn is_exhausted(&self) -> bool {
        match self {
            TernaryDigits::Small { r, .. } => *r == 0,
            TernaryDigits::Big { r, .. } => r.is_zero(),
        }
    }

    fn next_digit(&mut self) -> u8 {
        match self {
            TernaryDigits::Small { r, shift } => {
                *r *= 3;
                let d = (*r >> *shift) as u8;
                *r &= (1u128 << *shift) - 1;
                d
            }
            TernaryDigits::Big { r, shift } => {
                *r *= 3u32;
                let d = (&*r >> *shift).to_u8().expect("digit < 3");
                if d > 0 {
                    *r -= BigUint::from(d) << *shift;
                }
                d
            }
        }
    }
}

/// `m * 2^e` without intermediate overflow or underflow of the scale factor.
fn ldexp(mut m: f64, mut e: i32) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
    }
    m * 2f64.powi(e)
}

/// Cantor staircase on the float path: `f` on `C`, extended to every float by
/// stopping at the first ternary digit 1. Reads at most `digits` significant
/// digits, so the truncation error is below `2^-digits` relative.
pub fn staircase_f64(x: f64, digits: u32) -> f64 {
    let k = x.floor();
    let frac = x - k;
    if frac == 0.0 {
        return k;
    }
    let (mant, shift) = dyadic_parts(frac);
    let mut gen = TernaryDigits::new(mant, shift);
    let mut leading = 0i32;
    let mut acc: u128 = 0;
    let mut len = 0i32;
    while !gen.is_exhausted() && (len as u32) < digits {
        let d = gen.next_digit();
        if len == 0 && d == 0 {
            leading += 1;
            continue;
        }
        if d == 1 {
            // the staircase is flat on the removed middle third
            acc = (acc << 1) | 1;
            len += 1;
            break;
        }
        acc = (acc << 1) | (d as u128 / 2);
        len += 1;
    }
    k + ldexp(acc as f64, -(leading + len))
}

/// `f^-1(y)` on the float path: exact on the dyadic value of `y`, one rounding.
pub fn inverse_f64(y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::domain(format_args!("cantor inverse of non-finite {y}")));
    }
    let k = y.floor();
    let frac = y - k;
    if frac == 0.0 {
        return Ok(k);
    }
    // frac = mant / 2^s; the repeated-1 form is (mant - 1) in s bits then (1)
    let (mant, s) = dyadic_parts(frac);
    let head = mant - 1;
    let bits: Vec<u8> = (0..s).rev().map(|i| if i < 64 { ((head >> i) & 1) as u8 } else { 0 }).collect();
    let t = radix::digits_to_biguint(&bits, 3);
    let scale = num::pow(BigUint::from(3u32), s as usize);
    let kk = BigInt::from(k as i64);
    let numer = kk * BigInt::from(scale.clone()) + BigInt::from(t * 2u32 + 1u32);
    let x = BigRational::new_raw(numer, BigInt::from(scale));
    x.to_f64().ok_or_else(|| Error::domain(format_args!("cantor inverse of {y} overflowed")))
}
