//! Exact arithmetic kernels.
//!
//! Everything in the code-bound pipeline is computed over ℚ or ℚ(√2) with
//! no rounding. Floating-point values appear only in [`BigFloat`], whose
//! precision travels with the value.

mod homopoly;
mod qsqrt2;
mod ratpoly;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use homopoly::HomoPoly2;
pub use qsqrt2::QSqrt2;
pub use ratpoly::RatPoly;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = rug::Rational;

/// Arbitrary-precision binary floating point; carries its own precision.
pub type BigFloat = rug::Float;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision must be at least {min} bits, got {got}")]
    PrecisionTooLow { min: u32, got: u32 },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Minimal ordered-field interface needed by the exact simplex.
pub trait OrderedField: Clone + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn sign(&self) -> Ordering;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, FieldError>;
    fn neg(&self) -> Self;

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    /// `self -= x·y`
    fn sub_mul_assign(&mut self, x: &Self, y: &Self) {
        *self = self.sub(&x.mul(y));
    }
}

impl OrderedField for Rat {
    fn zero() -> Self {
        Rat::new()
    }
    fn one() -> Self {
        Rat::from(1)
    }
    fn sign(&self) -> Ordering {
        self.cmp0()
    }
    fn add(&self, rhs: &Self) -> Self {
        Rat::from(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rat::from(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rat::from(self * rhs)
    }
    fn div(&self, rhs: &Self) -> Result<Self, FieldError> {
        if rhs.cmp0() == Ordering::Equal {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rat::from(self / rhs))
    }
    fn neg(&self) -> Self {
        Rat::from(-self)
    }
    fn sub_mul_assign(&mut self, x: &Self, y: &Self) {
        *self -= Rat::from(x * y);
    }
}

/// Working precision of floating-point results, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT_BITS: u32 = 256;

    pub fn new(bits: u32) -> Result<Self, FieldError> {
        if bits < Self::MIN_BITS {
            return Err(FieldError::PrecisionTooLow {
                min: Self::MIN_BITS,
                got: bits,
            });
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Roughly the number of significant decimal digits.
    pub fn decimal_digits(self) -> usize {
        (self.0 as f64 * std::f64::consts::LOG10_2).floor() as usize
    }

    /// Zero at this precision.
    pub fn zero(self) -> BigFloat {
        BigFloat::new(self.0)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(Self::DEFAULT_BITS)
    }
}

impl TryFrom<u32> for Precision {
    type Error = FieldError;
    fn try_from(bits: u32) -> Result<Self, FieldError> {
        Precision::new(bits)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.0
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// π at the given precision.
pub fn pi(prec: u32) -> BigFloat {
    BigFloat::with_val(prec, rug::float::Constant::Pi)
}

/// Parses `"3"`, `"-8/7"` or a terminating decimal such as `"23.5"` exactly.
pub fn parse_rat(s: &str) -> Result<Rat, FieldError> {
    let s = s.trim();
    let err = || FieldError::Parse(s.to_string());
    if s.contains('/') {
        return Rat::from_str(s).map_err(|_| err());
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let num = rug::Integer::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    let den = rug::Integer::from(rug::Integer::u_pow_u(10, frac_part.len() as u32));
    let r = Rat::from((num, den));
    Ok(if neg { -r } else { r })
}
