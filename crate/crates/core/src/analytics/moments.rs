//! EZ_{n,k} = C(n,k)/k! and its Stirling asymptotics.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::logvalue::{ln_binomial, ln_factorial, LogValue};
use crate::error::{Error, Result};
use crate::extfloat::ExtFloat;

/// Largest `n` for which [`expected_z`] also returns the exact rational.
pub const EXACT_EXPECTATION_MAX_N: usize = 2000;

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// C(n,k)/k! as an exact rational.
pub fn expected_z_exact(n: usize, k: usize) -> BigRational {
    BigRational::new(
        BigInt::from(binomial(BigUint::from(n), BigUint::from(k))),
        BigInt::from(factorial(k)),
    )
}

/// ln(C(n,k)/k!) via log-gamma; `k` may be real.
pub fn expected_z_log(n: f64, k: f64) -> LogValue {
    LogValue(ln_binomial(n, k) - ln_factorial(k))
}

/// C(n,k)/k! in extended range. Built from the exact integers (two roundings)
/// while they stay cheap, from log-gamma beyond.
pub fn expected_z_ext(n: usize, k: usize) -> ExtFloat {
    if k > n {
        return ExtFloat::ZERO;
    }
    if k <= 20_000 {
        let c = binomial(BigUint::from(n), BigUint::from(k));
        ExtFloat::from_biguint(&c) / ExtFloat::from_biguint(&factorial(k))
    } else {
        ExtFloat::from_ln(expected_z_log(n as f64, k as f64).ln())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedZ {
    pub n: usize,
    pub k: usize,
    /// `p/q` when `n ≤ EXACT_EXPECTATION_MAX_N`.
    pub exact: Option<String>,
    pub log: LogValue,
}

/// EZ_{n,k}: log-gamma value always, exact rational for moderate `n`.
pub fn expected_z(n: usize, k: usize) -> Result<ExpectedZ> {
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    let exact = (n <= EXACT_EXPECTATION_MAX_N).then(|| {
        let r = expected_z_exact(n, k);
        format!("{}/{}", r.numer(), r.denom())
    });
    Ok(ExpectedZ {
        n,
        k,
        exact,
        log: expected_z_log(n as f64, k as f64),
    })
}

/// Leading-order asymptotics of EZ_{n,k} with `k = c·n^l`:
///
/// * `l < 1/2`: `(2πk)^{-1} · [(e/c)² n^{1-2l}]^k`
/// * `l = 1/2`: `exp(-c²/2) · (2πk)^{-1} · (e/c)^{2k}`
pub fn expected_z_asymptotic(n: f64, c: f64, l: f64) -> Result<LogValue> {
    if !(l > 0.0 && l <= 0.5) {
        return Err(Error::InvalidParameter(format!("l = {l} outside (0, 1/2]")));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    let k = c * n.powf(l);
    if k.is_nan() || k < 1.0 {
        return Err(Error::InvalidParameter(format!("c·n^l = {k} < 1")));
    }
    let prefactor = -(2.0 * std::f64::consts::PI * k).ln();
    let base = 2.0 * (1.0 - c.ln()) + (1.0 - 2.0 * l) * n.ln();
    let mut ln = prefactor + k * base;
    if l == 0.5 {
        ln -= c * c / 2.0;
    }
    Ok(LogValue(ln))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_values() {
        assert_eq!(
            expected_z_exact(5, 3),
            BigRational::new(BigInt::from(5), BigInt::from(3))
        );
        assert_eq!(
            expected_z_exact(7, 1),
            BigRational::from_integer(BigInt::from(7))
        );
        assert_eq!(
            expected_z_exact(6, 6),
            BigRational::new(BigInt::one(), BigInt::from(720))
        );
        let e = expected_z(5, 3).unwrap();
        assert_eq!(e.exact.as_deref(), Some("5/3"));
        assert!((e.log.exp() - 5.0 / 3.0).abs() < 1e-14);
        assert!(expected_z(3, 4).is_err());
    }

    #[test]
    fn ext_matches_log() {
        for &(n, k) in &[(100usize, 7usize), (1000, 31), (100_000, 400)] {
            let ext = expected_z_ext(n, k);
            let log = expected_z_log(n as f64, k as f64);
            assert!((ext.ln() - log.ln()).abs() < 1e-10 * log.ln().abs().max(1.0));
        }
        assert_eq!(expected_z_ext(9, 1).to_f64(), 9.0);
    }

    #[test]
    fn asymptotic_ratio_near_one() {
        let (n, c, l) = (1e6f64, 1.0, 0.3);
        let k = c * n.powf(l);
        let exact = expected_z_log(n, k);
        let asym = expected_z_asymptotic(n, c, l).unwrap();
        let ratio = (exact.ln() - asym.ln()).exp();
        assert!((0.9..=1.1).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn critical_c_equals_e() {
        let e = std::f64::consts::E;
        let above: Vec<f64> = [1e6, 1e8, 1e10]
            .iter()
            .map(|&n| expected_z_asymptotic(n, e * 1.01, 0.5).unwrap().ln())
            .collect();
        assert!(above.iter().all(|&v| v < 0.0));
        let below: Vec<f64> = [1e6, 1e8, 1e10]
            .iter()
            .map(|&n| expected_z_asymptotic(n, e * 0.99, 0.5).unwrap().ln())
            .collect();
        assert!(below.iter().all(|&v| v > 0.0));
        assert!(below.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn asymptotic_rejects_bad_input() {
        assert!(expected_z_asymptotic(100.0, 1.0, 0.6).is_err());
        assert!(expected_z_asymptotic(100.0, 1.0, 0.0).is_err());
        assert!(expected_z_asymptotic(100.0, -1.0, 0.3).is_err());
        assert!(expected_z_asymptotic(1.0, 0.5, 0.3).is_err());
    }
}
