use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

/// A positive quantity held as its natural logarithm; `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue(pub f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn from_value(x: f64) -> Self {
        assert!(x >= 0.0, "LogValue needs a nonnegative value");
        LogValue(x.ln())
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Saturates outside the f64 range.
    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

/// Log-sum-exp.
impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        let (hi, lo) = if self.0 >= rhs.0 {
            (self.0, rhs.0)
        } else {
            (rhs.0, self.0)
        };
        if lo == f64::NEG_INFINITY {
            return LogValue(hi);
        }
        LogValue(hi + (lo - hi).exp().ln_1p())
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 + rhs.0)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        assert!(!rhs.is_zero(), "LogValue division by zero");
        if self.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 - rhs.0)
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let l10 = self.log10();
        let e10 = l10.floor();
        write!(f, "{:.12}e{}", 10f64.powf(l10 - e10), e10)
    }
}

/// ln m! for real `m ≥ 0`.
pub fn ln_factorial(m: f64) -> f64 {
    if m == 0.0 || m == 1.0 {
        return 0.0;
    }
    ln_gamma(m + 1.0)
}

/// ln C(n, k) for real `0 ≤ k ≤ n`; `-inf` outside that range.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = LogValue::from_value(3.0);
        let b = LogValue::from_value(5.0);
        assert!(((a + b).exp() - 8.0).abs() < 1e-14);
        assert!(((a * b).exp() - 15.0).abs() < 1e-13);
        assert!(((b / a).exp() - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!((a + LogValue::ZERO).ln(), a.ln());
        assert!((a * LogValue::ZERO).is_zero());
        // far-apart terms
        let big = LogValue(1e5);
        assert_eq!((big + LogValue(0.0)).ln(), 1e5);
    }

    #[test]
    fn binomials() {
        assert!((ln_binomial(10.0, 3.0) - 120f64.ln()).abs() < 1e-13);
        assert!((ln_binomial(60.0, 30.0) - 118264581564861424f64.ln()).abs() < 1e-12);
        assert_eq!(ln_binomial(3.0, 4.0), f64::NEG_INFINITY);
        assert_eq!(ln_factorial(0.0), 0.0);
    }
}
