//! Working-precision bookkeeping.
//!
//! Every numeric routine takes a [`PrecisionContext`]; values are carried at
//! `digits + guard` decimal digits and results are trusted to `digits`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

pub const MIN_DIGITS: u32 = 16;
pub const MIN_GUARD: u32 = 10;
pub const DEFAULT_MAX_DIGITS: u32 = 1000;
/// Extra digits tried once before giving up with `PrecisionExhausted`.
pub const ESCALATION_DIGITS: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
    max_digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32, guard: u32) -> Result<Self> {
        Self::with_max(digits, guard, DEFAULT_MAX_DIGITS.max(digits + guard))
    }

    pub fn with_max(digits: u32, guard: u32, max_digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidPrecision(format!("digits = {digits} < {MIN_DIGITS}")));
        }
        if guard < MIN_GUARD {
            return Err(Error::InvalidPrecision(format!("guard = {guard} < {MIN_GUARD}")));
        }
        if digits + guard > max_digits {
            return Err(Error::InvalidPrecision(format!(
                "digits + guard = {} exceeds max_digits = {max_digits}",
                digits + guard
            )));
        }
        Ok(Self { digits, guard, max_digits })
    }

    /// `digits` with the default guard of 10.
    pub fn digits(digits: u32) -> Result<Self> {
        Self::new(digits, MIN_GUARD)
    }

    pub fn working_digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard
    }

    pub fn max_digits(&self) -> u32 {
        self.max_digits
    }

    /// Binary precision used for every `Float` built under this context.
    pub fn bits(&self) -> u32 {
        ((self.digits + self.guard) as f64 * LOG2_10).ceil() as u32 + 4
    }

    /// Same guard policy with `extra` more working digits, if the cap allows.
    pub fn escalated(&self, extra: u32) -> Option<Self> {
        let digits = self.digits + extra;
        (digits + self.guard <= self.max_digits).then_some(Self { digits, ..*self })
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits())
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// 10^(-e) at working precision.
    pub fn pow10_neg(&self, e: i64) -> Float {
        let ten = self.float(10);
        ten.pow(-(e as i32))
    }

    /// The tolerance 10^(-digits+guard) quoted throughout the library's checks.
    pub fn tolerance(&self) -> Float {
        self.pow10_neg(self.digits as i64 - self.guard as i64)
    }

    /// Roughly one unit in the last carried place, relative.
    pub fn epsilon(&self) -> Float {
        let one = self.float(1);
        one >> (self.bits() as i32 - 1)
    }

    /// Parse a decimal or rational literal such as `2.5`, `-1` or `5/2`.
    pub fn parse(&self, s: &str) -> Result<Float> {
        if let Ok(q) = s.trim().parse::<rug::Rational>() {
            return Ok(self.float(&q));
        }
        Float::parse(s.trim())
            .map(|p| self.float(p))
            .map_err(|e| Error::InvalidArgument(format!("bad number `{s}`: {e}")))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { digits: 50, guard: MIN_GUARD, max_digits: DEFAULT_MAX_DIGITS }
    }
}

/// Scientific notation with `sig` significant digits, e.g. `-1.2340000e-5`.
pub fn format_sci(x: &Float, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return format!("0.{}e0", "0".repeat(sig.max(1) - 1));
    }
    let (neg, mant, exp) = x.to_sign_string_exp(10, Some(sig.max(1)));
    let exp = exp.expect("finite nonzero value has an exponent") - 1;
    let (head, tail) = mant.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

/// log10|x| as an `f64`; works far below the `f64` range.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = Float::with_val(64, x.abs_ref());
    a.log10().to_f64()
}
