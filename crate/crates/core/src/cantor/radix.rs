//! Eventually periodic radix expansions of rationals.
//!
//! Every rational has an expansion `intpart . preperiod (period)` in any base.
//! Conversion uses long division with cycle detection; the period starts at
//! the first remainder after the preperiod, so no remainder table is needed.

use std::fmt;

use num::integer::Integer;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::{BigInt, BigRational, BigUint};

use crate::error::{Error, Result};

/// Largest admissible period-generating part of a denominator, `2^64`.
pub const MAX_PERIODIC_MODULUS: u128 = 1 << 64;

/// Hard cap on the number of period digits produced by long division.
pub const MAX_PERIOD_DIGITS: usize = 1 << 24;

/// `intpart + 0.preperiod(period)` in base 2 or 3.
///
/// `intpart` carries the sign; the digits always describe the fractional part
/// in `[0, 1]`, so `-2/3` is stored as `-1 + 0.1` in base 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadixExpansion {
    base: u8,
    intpart: BigInt,
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

fn check_base(base: u8) -> Result<()> {
    if base == 2 || base == 3 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("radix must be 2 or 3, got {base}")))
    }
}

impl RadixExpansion {
    pub fn new(base: u8, intpart: BigInt, preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        check_base(base)?;
        if preperiod.iter().chain(&period).any(|&d| d >= base) {
            return Err(Error::Parameter(format!("digit out of range for base {base}")));
        }
        Ok(RadixExpansion { base, intpart, preperiod, period })
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn intpart(&self) -> &BigInt {
        &self.intpart
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn is_terminating(&self) -> bool {
        self.period.is_empty()
    }

    /// All fractional digits, preperiod then period.
    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        self.preperiod.iter().chain(self.period.iter()).copied()
    }

    /// The alternative representation ending in repeated `base - 1`.
    ///
    /// Integers and non-terminating expansions are returned unchanged.
    pub fn to_non_terminating(&self) -> Self {
        if !self.is_terminating() || self.preperiod.is_empty() {
            return self.clone();
        }
        let mut pre = self.preperiod.clone();
        // canonical terminating expansions end in a nonzero digit
        let last = pre.last_mut().expect("nonempty");
        debug_assert!(*last > 0);
        *last -= 1;
        RadixExpansion {
            base: self.base,
            intpart: self.intpart.clone(),
            preperiod: pre,
            period: vec![self.base - 1],
        }
    }

    /// Inverse of [`to_non_terminating`](Self::to_non_terminating): folds a
    /// repeated `base - 1` tail into a carry.
    pub fn to_terminating(&self) -> Self {
        if self.period != [self.base - 1] {
            return self.clone();
        }
        let mut pre = self.preperiod.clone();
        let mut intpart = self.intpart.clone();
        loop {
            match pre.last_mut() {
                None => {
                    intpart += 1;
                    break;
                }
                Some(d) if *d == self.base - 1 => {
                    pre.pop();
                }
                Some(d) => {
                    *d += 1;
                    break;
                }
            }
        }
        RadixExpansion { base: self.base, intpart, preperiod: pre, period: Vec::new() }
    }

    /// Digit-wise image under `map`, reinterpreted in `base`.
    pub fn map_digits(&self, base: u8, map: impl Fn(u8) -> u8) -> Result<Self> {
        RadixExpansion::new(
            base,
            self.intpart.clone(),
            self.preperiod.iter().map(|&d| map(d)).collect(),
            self.period.iter().map(|&d| map(d)).collect(),
        )
    }

    /// The represented rational, in lowest terms.
    pub fn value(&self) -> BigRational {
        let b = BigUint::from(self.base);
        let a = self.preperiod.len();
        let pre = digits_to_biguint(&self.preperiod, self.base);
        let scale = num::pow(b.clone(), a);
        let (numer, denom) = if self.period.is_empty() {
            (pre, scale)
        } else {
            let per = digits_to_biguint(&self.period, self.base);
            let cycle = num::pow(b, self.period.len()) - 1u32;
            (pre * &cycle + per, scale * cycle)
        };
        let frac = reduce(BigInt::from(numer), BigInt::from(denom));
        // gcd(n + k d, d) = gcd(n, d): the sum stays in lowest terms
        let (n, d) = frac.into();
        let n = n + &self.intpart * &d;
        BigRational::new_raw(n, d)
    }
}

impl fmt::Display for RadixExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.intpart)?;
        if !self.preperiod.is_empty() || !self.period.is_empty() {
            f.write_str(".")?;
            for d in &self.preperiod {
                write!(f, "{d}")?;
            }
            if !self.period.is_empty() {
                f.write_str("(")?;
                for d in &self.period {
                    write!(f, "{d}")?;
                }
                f.write_str(")")?;
            }
        }
        write!(f, "_{}", self.base)
    }
}

/// Big-endian digit string to integer. Splits long strings in halves so the
/// cost is dominated by big multiplications rather than a quadratic scan.
pub(crate) fn digits_to_biguint(digits: &[u8], base: u8) -> BigUint {
    const LEAF: usize = 512;
    if digits.is_empty() {
        return BigUint::zero();
    }
    if base.is_power_of_two() || digits.len() <= LEAF {
        return BigUint::from_radix_be(digits, base as u32).expect("digits validated");
    }
    let mid = digits.len() / 2;
    let (hi, lo) = digits.split_at(mid);
    let shift = num::pow(BigUint::from(base), lo.len());
    digits_to_biguint(hi, base) * shift + digits_to_biguint(lo, base)
}

/// Euclidean gcd. Unlike a binary gcd its step count follows the continued
/// fraction of `a/b`, which is short for the huge-but-structured numerators
/// produced by periodic expansions.
pub(crate) fn euclid_gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// `numer / denom` in lowest terms with a positive denominator.
pub(crate) fn reduce(numer: BigInt, denom: BigInt) -> BigRational {
    let g = euclid_gcd(numer.magnitude(), denom.magnitude());
    if g.is_zero() || g.is_one() {
        return normalize_sign(numer, denom);
    }
    let g = BigInt::from(g);
    normalize_sign(numer / &g, denom / &g)
}

fn normalize_sign(numer: BigInt, denom: BigInt) -> BigRational {
    if denom.is_negative() {
        BigRational::new_raw(-numer, -denom)
    } else {
        BigRational::new_raw(numer, denom)
    }
}

/// Standard expansion: terminating whenever the value has a finite expansion.
pub fn to_standard_expansion(x: &BigRational, base: u8) -> Result<RadixExpansion> {
    check_base(base)?;
    let intpart = x.floor().to_integer();
    let frac = x - BigRational::from_integer(intpart.clone());
    let r = frac.numer().magnitude().clone();
    let q = frac.denom().magnitude().clone();
    if r.is_zero() {
        return Ok(RadixExpansion { base, intpart, preperiod: Vec::new(), period: Vec::new() });
    }

    // q = base^a * m with gcd(m, base) = 1; a is the preperiod length
    let b = BigUint::from(base);
    let mut m = q;
    let mut a = 0usize;
    loop {
        let (quot, rem) = m.div_rem(&b);
        if !rem.is_zero() {
            break;
        }
        m = quot;
        a += 1;
    }
    let m_small = m.to_u128().filter(|&v| v <= MAX_PERIODIC_MODULUS).ok_or_else(|| {
        Error::Precision(format!("denominator part {m} coprime to {base} exceeds 2^64"))
    })?;

    // frac * base^a = r / m = head + rem / m
    let (head, rem) = r.div_rem(&m);
    let mut preperiod = if head.is_zero() { Vec::new() } else { head.to_radix_be(base as u32) };
    if preperiod.len() < a {
        let mut padded = vec![0u8; a - preperiod.len()];
        padded.extend_from_slice(&preperiod);
        preperiod = padded;
    }

    let start = rem.to_u128().expect("rem < m");
    let mut period = Vec::new();
    if start != 0 {
        let base = base as u128;
        let mut r = start;
        loop {
            r *= base;
            period.push((r / m_small) as u8);
            r %= m_small;
            if r == start {
                break;
            }
            if period.len() >= MAX_PERIOD_DIGITS {
                return Err(Error::Precision(format!(
                    "period of 1/{m_small} in base {base} exceeds {MAX_PERIOD_DIGITS} digits"
                )));
            }
        }
    }
    Ok(RadixExpansion { base, intpart, preperiod, period })
}

/// Canonical expansion of `x`.
///
/// Base 3 returns the standard form. Base 2 returns dyadic non-integers in the
/// non-terminating form (repeated-1 tail), which is the representative the
/// Cantor-line construction selects.
pub fn to_expansion(x: &BigRational, base: u8) -> Result<RadixExpansion> {
    let e = to_standard_expansion(x, base)?;
    Ok(if base == 2 { e.to_non_terminating() } else { e })
}
