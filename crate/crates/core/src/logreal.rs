//! Signed numbers stored as `sign · exp(ln_mag)`.
//!
//! The constants of the error bound carry factors like `e^{2nγₙ}` with
//! `γ₃ = 78`, far outside the `f64` range, so they are only ever
//! manipulated through this type.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// `sign · exp(hi + lo)`, with `hi` integer-valued and `lo ∈ [0, 1)`.
/// Splitting the log keeps products of numbers like `e^{63300}` and
/// `e^{-63300}` exact in their integer part.
#[derive(Debug, Clone, Copy)]
pub struct LogReal {
    sign: i8,
    hi: f64,
    lo: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        hi: f64::NEG_INFINITY,
        lo: 0.0,
    };
    pub const ONE: LogReal = LogReal {
        sign: 1,
        hi: 0.0,
        lo: 0.0,
    };

    fn normalized(sign: i8, hi: f64, lo: f64) -> Self {
        if sign == 0 {
            return Self::ZERO;
        }
        if !hi.is_finite() || !lo.is_finite() {
            return Self {
                sign: sign.signum(),
                hi: hi + lo,
                lo: 0.0,
            };
        }
        let whole = lo.floor();
        Self {
            sign: sign.signum(),
            hi: hi + whole,
            lo: lo - whole,
        }
    }

    /// Positive number with the given natural log.
    pub fn from_ln(ln_mag: f64) -> Self {
        Self::normalized(1, 0.0, ln_mag)
    }

    /// Positive number `exp(int_part + frac_part)`; `int_part` must be an
    /// integer for the split to stay exact.
    pub fn from_ln_parts(int_part: f64, frac_part: f64) -> Self {
        debug_assert_eq!(int_part, int_part.trunc());
        Self::normalized(1, int_part, frac_part)
    }

    pub fn from_parts(sign: i8, ln_mag: f64) -> Self {
        Self::normalized(sign, 0.0, ln_mag)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::from_parts(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude.
    pub fn ln_mag(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.hi + self.lo
        }
    }

    pub fn log10_mag(&self) -> f64 {
        self.ln_mag() / std::f64::consts::LN_10
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Plain value; may overflow to infinity or underflow to zero.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * (self.hi + self.lo).exp()
        }
    }

    /// Plain value when it is finite and, unless the number is zero, nonzero.
    pub fn to_f64_checked(&self) -> Option<f64> {
        let v = self.to_f64();
        if !v.is_finite() || (v == 0.0 && self.sign != 0) {
            None
        } else {
            Some(v)
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            sign: self.sign.abs(),
            ..*self
        }
    }

    pub fn recip(&self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        Self::normalized(self.sign, -self.hi, -self.lo)
    }

    /// `|x|^p` for real `p`; the sign is dropped.
    pub fn abs_powf(&self, p: f64) -> Self {
        if self.sign == 0 {
            if p > 0.0 {
                Self::ZERO
            } else {
                Self::from_ln(f64::INFINITY)
            }
        } else if p == p.trunc() && p.abs() < 1e6 {
            Self::normalized(1, p * self.hi, p * self.lo)
        } else {
            let scaled = p * self.hi;
            let whole = scaled.trunc();
            Self::normalized(1, whole, (scaled - whole) + p * self.lo)
        }
    }

    pub fn sqrt(&self) -> Self {
        assert!(self.sign >= 0, "square root of a negative LogReal");
        self.abs_powf(0.5)
    }

    /// `exp(self)` as a positive `LogReal`; the result's log is
    /// `self.to_f64()`.
    pub fn exp(&self) -> Self {
        Self::from_ln(self.to_f64())
    }

    /// Larger of two values.
    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `ln|self| - ln|other|` without forming either log in full.
    fn ln_ratio(&self, other: &Self) -> f64 {
        (self.hi - other.hi) + (self.lo - other.lo)
    }
}

impl Mul for LogReal {
    type Output = LogReal;

    fn mul(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 || rhs.sign == 0 {
            LogReal::ZERO
        } else {
            LogReal::normalized(self.sign * rhs.sign, self.hi + rhs.hi, self.lo + rhs.lo)
        }
    }
}

impl Div for LogReal {
    type Output = LogReal;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogReal) -> LogReal {
        self * rhs.recip()
    }
}

impl PartialEq for LogReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for LogReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {
                let d = self.ln_ratio(other);
                match self.sign {
                    0 => Some(Ordering::Equal),
                    1 => d.partial_cmp(&0.0),
                    _ => 0.0.partial_cmp(&d),
                }
            }
            ord => Some(ord),
        }
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_f64_checked() {
            Some(v) => write!(f, "{v:e}"),
            None => {
                let l10 = self.log10_mag();
                let exponent = l10.floor();
                let mantissa = 10f64.powf(l10 - exponent);
                let sign = if self.sign < 0 { "-" } else { "" };
                write!(f, "{sign}{mantissa}e{exponent}")
            }
        }
    }
}

impl Serialize for LogReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LogReal", 3)?;
        s.serialize_field("sign", &self.sign)?;
        let log10 = if self.sign == 0 {
            None
        } else {
            Some(self.log10_mag())
        };
        s.serialize_field("log10Mag", &log10)?;
        s.serialize_field("decimal", &self.to_f64_checked())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn far_outside_f64_range() {
        let big = LogReal::from_ln(1000.0);
        assert_eq!(big.to_f64_checked(), None);
        let back = big * LogReal::from_ln(-999.0);
        assert!((back.to_f64() - std::f64::consts::E).abs() < 1e-12);
        assert!(big.to_string().ends_with("e434"));
    }

    #[test]
    fn integer_part_cancels_exactly() {
        let huge = LogReal::from_ln_parts(63_300.0, 0.123_456_789_012_345_6);
        let tiny = LogReal::from_ln_parts(-63_300.0, 0.2);
        let r = huge * tiny;
        assert!((r.ln_mag() - (0.123_456_789_012_345_6 + 0.2)).abs() < 1e-16);
        let q = (huge / LogReal::from_ln_parts(63_300.0, 0.0)).to_f64();
        assert!((q - 0.123_456_789_012_345_6f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn zero_absorbs() {
        assert!((LogReal::ZERO * LogReal::from_ln(5.0)).is_zero());
        assert_eq!(LogReal::ZERO.to_f64(), 0.0);
        assert_eq!(LogReal::from_f64(0.0), LogReal::ZERO);
    }

    #[test]
    fn ordering_respects_sign() {
        let a = LogReal::from_f64(-3.0);
        let b = LogReal::from_f64(-2.0);
        let c = LogReal::from_f64(1e-300);
        assert!(a < b);
        assert!(b < LogReal::ZERO);
        assert!(LogReal::ZERO < c);
    }

    #[test]
    fn serializes_with_decimal_when_representable() {
        let v = serde_json::to_value(LogReal::from_f64(-2.0)).unwrap();
        assert_eq!(v["sign"], -1);
        assert!((v["log10Mag"].as_f64().unwrap() - 2f64.log10()).abs() < 1e-15);
        assert_eq!(v["decimal"], -2.0);
        let v = serde_json::to_value(LogReal::from_ln(1e4)).unwrap();
        assert!(v["decimal"].is_null());
    }

    proptest! {
        #[test]
        fn multiplication_adds_logs(x in -1e6f64..1e6, y in -1e6f64..1e6) {
            prop_assume!(x != 0.0 && y != 0.0);
            let p = LogReal::from_f64(x) * LogReal::from_f64(y);
            prop_assert!((p.to_f64() - x * y).abs() <= 1e-12 * (x * y).abs());
        }

        #[test]
        fn positive_order_is_log_order(a in -700f64..700.0, b in -700f64..700.0) {
            let (la, lb) = (LogReal::from_ln(a), LogReal::from_ln(b));
            prop_assert_eq!(la.partial_cmp(&lb), a.partial_cmp(&b));
        }
    }
}
