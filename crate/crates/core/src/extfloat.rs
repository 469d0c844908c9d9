//! Extended-range floating point: an f64 mantissa in `[1, 2)` with a
//! separate 64-bit binary exponent, so counts like C(10^5, 300) stay finite.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `mantissa · 2^exponent`, with `mantissa ∈ [1, 2)` or the canonical zero
/// `(0, 0)`. Only nonnegative values are represented.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExtFloat {
    mantissa: f64,
    exponent: i64,
}

const MANTISSA_MASK: u64 = (1u64 << 52) - 1;
const ONE_EXP_BITS: u64 = 1023u64 << 52;

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat {
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: ExtFloat = ExtFloat {
        mantissa: 1.0,
        exponent: 0,
    };

    /// Normalizes `m · 2^e` for finite `m ≥ 0`.
    pub fn from_parts(m: f64, e: i64) -> Self {
        assert!(
            m.is_finite() && m >= 0.0,
            "ExtFloat needs finite m >= 0, got {m}"
        );
        if m == 0.0 {
            return Self::ZERO;
        }
        let (frac, shift) = split(m);
        Self {
            mantissa: frac,
            exponent: e + shift,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::from_parts(x, 0)
    }

    pub fn from_u64(x: u64) -> Self {
        Self::from_f64(x as f64)
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        let bits = x.bits();
        if bits <= 64 {
            return Self::from_u64(x.to_u64().unwrap_or(0));
        }
        let shift = bits - 64;
        let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
        Self::from_parts(top as f64, shift as i64)
    }

    /// `exp(ln_value)`; `-inf` maps to zero.
    pub fn from_ln(ln_value: f64) -> Self {
        if ln_value == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let log2 = ln_value / std::f64::consts::LN_2;
        let e = log2.floor();
        let frac = ln_value - e * std::f64::consts::LN_2;
        Self::from_parts(frac.exp(), e as i64)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// Saturates to `f64::INFINITY` or 0 outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.exponent > 1100 {
            return f64::INFINITY;
        }
        if self.exponent < -1100 {
            return 0.0;
        }
        let e = self.exponent as i32;
        if e < -1000 {
            // two steps so the intermediate stays normal
            return self.mantissa * 2f64.powi(e + 200) * 2f64.powi(-200);
        }
        self.mantissa * 2f64.powi(e)
    }

    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.ln() + self.exponent as f64 * std::f64::consts::LN_2
        }
    }

    pub fn log10(&self) -> f64 {
        self.ln() / std::f64::consts::LN_10
    }

    /// `|self − other|`, for comparing ratios against 1.
    pub fn abs_diff(self, other: ExtFloat) -> ExtFloat {
        let (hi, lo) = if self >= other {
            (self, other)
        } else {
            (other, self)
        };
        if lo.is_zero() {
            return hi;
        }
        let d = hi.exponent - lo.exponent;
        if d > 64 {
            return hi;
        }
        let m = hi.mantissa - lo.mantissa * 2f64.powi(-(d as i32));
        Self::from_parts(m.max(0.0), hi.exponent)
    }

    /// Relative difference `|a − b| / max(a, b)` (0 when both are zero).
    pub fn rel_diff(self, other: ExtFloat) -> f64 {
        let hi = if self >= other { self } else { other };
        if hi.is_zero() {
            return 0.0;
        }
        (self.abs_diff(other) / hi).to_f64()
    }
}

/// Splits a positive normal-or-subnormal f64 into `(frac ∈ [1,2), exp)`.
fn split(m: f64) -> (f64, i64) {
    let bits = m.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        let (f, e) = split(m * 2f64.powi(64));
        return (f, e - 64);
    }
    let frac = f64::from_bits((bits & MANTISSA_MASK) | ONE_EXP_BITS);
    (frac, raw_exp - 1023)
}

impl Default for ExtFloat {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Zero for ExtFloat {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }
}

impl Add for ExtFloat {
    type Output = ExtFloat;
    fn add(self, rhs: ExtFloat) -> ExtFloat {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = hi.exponent - lo.exponent;
        if d > 64 {
            return hi;
        }
        // 2^-d built directly; both mantissas are in [1, 2) so the sum is in [1, 4).
        let scale = f64::from_bits((1023 - d as u64) << 52);
        let m = hi.mantissa + lo.mantissa * scale;
        if m >= 2.0 {
            ExtFloat {
                mantissa: m * 0.5,
                exponent: hi.exponent + 1,
            }
        } else {
            ExtFloat {
                mantissa: m,
                exponent: hi.exponent,
            }
        }
    }
}

impl AddAssign for ExtFloat {
    fn add_assign(&mut self, rhs: ExtFloat) {
        *self = *self + rhs;
    }
}

impl<'a> AddAssign<&'a ExtFloat> for ExtFloat {
    fn add_assign(&mut self, rhs: &'a ExtFloat) {
        *self = *self + *rhs;
    }
}

impl Mul for ExtFloat {
    type Output = ExtFloat;
    fn mul(self, rhs: ExtFloat) -> ExtFloat {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Div for ExtFloat {
    type Output = ExtFloat;
    fn div(self, rhs: ExtFloat) -> ExtFloat {
        assert!(!rhs.is_zero(), "ExtFloat division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl PartialEq for ExtFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtFloat {}

impl PartialOrd for ExtFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exponent
                .cmp(&other.exponent)
                .then(self.mantissa.total_cmp(&other.mantissa)),
        }
    }
}

/// Prints as `m·2^e`.
impl fmt::Display for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·2^{}", self.mantissa, self.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        let x = ExtFloat::from_f64(12.0);
        assert_eq!((x.mantissa(), x.exponent()), (1.5, 3));
        assert_eq!(ExtFloat::from_f64(0.0), ExtFloat::ZERO);
        let tiny = ExtFloat::from_f64(f64::MIN_POSITIVE / 8.0);
        assert_eq!(tiny.to_f64(), f64::MIN_POSITIVE / 8.0);
    }

    #[test]
    fn big_values_stay_finite() {
        let big = BigUint::from(3u32).pow(2000);
        let e = ExtFloat::from_biguint(&big);
        assert!((e.ln() - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(e.to_f64(), f64::INFINITY);
        let sq = e * e;
        assert!((sq.ln() - 4000.0 * 3f64.ln()).abs() < 1e-9);
        assert!(((sq / e).rel_diff(e)) < 1e-15);
    }

    #[test]
    fn from_ln_roundtrip() {
        for &v in &[-800.0, -1.5, 0.0, 2.25, 700.0, 9000.0] {
            let x = ExtFloat::from_ln(v);
            assert!((x.ln() - v).abs() <= 1e-12 * v.abs().max(1.0));
        }
        assert!(ExtFloat::from_ln(f64::NEG_INFINITY).is_zero());
    }

    proptest! {
        #[test]
        fn agrees_with_f64(a in 0.0f64..1e150, b in 0.0f64..1e150) {
            let (x, y) = (ExtFloat::from_f64(a), ExtFloat::from_f64(b));
            let s = (x + y).to_f64();
            prop_assert!((s - (a + b)).abs() <= 1e-15 * (a + b));
            let p = (x * y).to_f64();
            prop_assert!((p - a * b).abs() <= 1e-15 * a * b);
            prop_assert_eq!(x.cmp(&y), a.total_cmp(&b));
            let d = x.abs_diff(y).to_f64();
            prop_assert!((d - (a - b).abs()).abs() <= 1e-15 * a.max(b));
        }
    }
}
