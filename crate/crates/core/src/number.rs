//! Machine numbers: exact integers of arbitrary size and binary64 reals.
//! Mixed operations promote to real.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Int(BigInt),
    Real(f64),
}

impl Number {
    pub fn int(n: i64) -> Number {
        Number::Int(BigInt::from(n))
    }

    /// Parse a numeric literal: `[+-]?digits` as an integer, or a decimal
    /// real with optional fraction and exponent.
    pub fn parse(text: &str) -> Option<Number> {
        let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
        if digits.is_empty() {
            return None;
        }
        if digits.bytes().all(|b| b.is_ascii_digit()) {
            return text.parse::<BigInt>().ok().map(Number::Int);
        }
        if !digits
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'))
        {
            return None;
        }
        // the mantissa needs at least one digit; `f64::from_str` is laxer
        let mantissa = digits.split(['e', 'E']).next().unwrap_or("");
        if !mantissa.bytes().any(|b| b.is_ascii_digit()) {
            return None;
        }
        text.parse::<f64>().ok().map(Number::Real)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Int(i) => i.to_f64().unwrap_or(f64::NAN),
            Number::Real(r) => *r,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Number::Int(i) => i.is_zero(),
            Number::Real(r) => *r == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Int(_))
    }

    pub fn add(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => Number::Int(a + b),
            _ => Number::Real(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => Number::Int(a - b),
            _ => Number::Real(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Number) -> Number {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => Number::Int(a * b),
            _ => Number::Real(self.to_f64() * other.to_f64()),
        }
    }

    /// Division. Exact operands stay exact when the divisor divides evenly.
    /// Returns `None` for an exact zero divisor.
    pub fn div(&self, other: &Number) -> Option<Number> {
        match (self, other) {
            (_, Number::Int(b)) if b.is_zero() => None,
            (Number::Int(a), Number::Int(b)) if (a % b).is_zero() => Some(Number::Int(a / b)),
            _ => Some(Number::Real(self.to_f64() / other.to_f64())),
        }
    }

    /// Truncating quotient and remainder for integers. `None` on a zero divisor
    /// or a non-integral operand.
    pub fn quotient(&self, other: &Number) -> Option<Number> {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) if !b.is_zero() => Some(Number::Int(a / b)),
            _ => None,
        }
    }

    pub fn remainder(&self, other: &Number) -> Option<Number> {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) if !b.is_zero() => Some(Number::Int(a % b)),
            _ => None,
        }
    }

    pub fn neg(&self) -> Number {
        match self {
            Number::Int(a) => Number::Int(-a),
            Number::Real(r) => Number::Real(-r),
        }
    }

    pub fn abs(&self) -> Number {
        match self {
            Number::Int(a) => Number::Int(a.abs()),
            Number::Real(r) => Number::Real(r.abs()),
        }
    }

    /// Numeric comparison (the order used by `<`, `=` and friends).
    pub fn compare(&self, other: &Number) -> Option<Ordering> {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }

    /// `eqv?`-style identity: same exactness and same value.
    pub fn eqv(&self, other: &Number) -> bool {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => a == b,
            (Number::Real(a), Number::Real(b)) => a.to_bits() == b.to_bits() || a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Int(i) => write!(f, "{i}"),
            Number::Real(r) if r.is_nan() => f.write_str("+nan.0"),
            Number::Real(r) if r.is_infinite() => {
                f.write_str(if *r > 0.0 { "+inf.0" } else { "-inf.0" })
            }
            // Debug is the shortest round-trip form and keeps the `.0`
            Number::Real(r) => write!(f, "{r:?}"),
        }
    }
}
