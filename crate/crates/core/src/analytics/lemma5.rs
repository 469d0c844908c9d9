//! The entropy inequality
//! `(a+b)^{a+b}/(a^a b^b) · (c+d)^{c+d}/(c^c d^d) · (a+c)^{a+c}(b+d)^{b+d}/S^S ≤ 1`
//! with `S = a+b+c+d`, and the helpers `F` and `G` behind it.

use crate::error::{Error, Result};

/// `x ln x`, continuous at 0.
fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `F(x, y) = (x+y) ln(x+y) − x ln x − y ln y`.
pub fn entropy_f(x: f64, y: f64) -> f64 {
    xlogx(x + y) - xlogx(x) - xlogx(y)
}

fn check_positive(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "arguments must be positive and finite: {vals:?}"
        )))
    }
}

/// `F(a,b) + F(c,d) − F(a+c, b+d)`, evaluated as
/// `a·ln1p(Δ/a) + b·ln1p(−Δ/b) + c·ln1p(−Δ/c) + d·ln1p(Δ/d)` with
/// `Δ = (bc − ad)/S`. The two expressions are algebraically equal; this one
/// has no cancellation between large `x ln x` terms and is exactly zero when
/// `ad = bc`. `d = 0` is allowed.
fn log_ratio_unchecked(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let s = a + b + c + d;
    let delta = (b * c - a * d) / s;
    let term_d = if d == 0.0 {
        0.0
    } else {
        d * (delta / d).ln_1p()
    };
    a * (delta / a).ln_1p() + b * (-delta / b).ln_1p() + c * (-delta / c).ln_1p() + term_d
}

/// Natural log of the left side of the inequality; always `≤ 0`.
pub fn lemma5_log_ratio(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    check_positive(&[a, b, c, d])?;
    Ok(log_ratio_unchecked(a, b, c, d))
}

/// The left side of the inequality, `exp(F(a,b) + F(c,d) − F(a+c, b+d))`.
pub fn lemma5_ratio(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    Ok(lemma5_log_ratio(a, b, c, d)?.exp())
}

/// `G(t) = F(a+c, b+t) − F(a,b) − F(c,t)` for `t ≥ 0`. Its unique minimum is
/// at `t = bc/a`, where it vanishes.
pub fn lemma5_g(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    check_positive(&[a, b, c])?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t must be finite and nonnegative, got {t}"
        )));
    }
    Ok(-log_ratio_unchecked(a, b, c, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equality_case() {
        assert_eq!(lemma5_ratio(1.0, 1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(lemma5_g(2.0, 3.0, 4.0, 6.0).unwrap(), 0.0);
    }

    #[test]
    fn strict_case() {
        // 2 ln 2 + 6 ln 3 − 5 ln 5
        let direct = 2.0 * 2f64.ln() + 6.0 * 3f64.ln() - 5.0 * 5f64.ln();
        let r = lemma5_log_ratio(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((r - direct).abs() < 1e-14);
        assert!(lemma5_ratio(1.0, 1.0, 1.0, 2.0).unwrap() < 1.0);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(lemma5_ratio(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(lemma5_ratio(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(lemma5_g(1.0, 1.0, 1.0, -0.5).is_err());
        assert!(lemma5_g(1.0, 1.0, 1.0, 0.0).unwrap() > 0.0);
    }

    #[test]
    fn g_at_zero_matches_f() {
        let (a, b, c) = (1.5, 0.7, 2.2);
        let direct = entropy_f(a + c, b) - entropy_f(a, b) - entropy_f(c, 0.0);
        assert!((lemma5_g(a, b, c, 0.0).unwrap() - direct).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn agrees_with_direct_f(a in 0.01f64..50.0, b in 0.01f64..50.0, c in 0.01f64..50.0, d in 0.01f64..50.0) {
            let direct = entropy_f(a, b) + entropy_f(c, d) - entropy_f(a + c, b + d);
            let stable = lemma5_log_ratio(a, b, c, d).unwrap();
            prop_assert!((direct - stable).abs() < 1e-11 * (a + b + c + d));
        }

        #[test]
        fn homogeneous_of_degree_one(a in 0.1f64..10.0, b in 0.1f64..10.0, c in 0.1f64..10.0, d in 0.1f64..10.0, lam in 0.1f64..10.0) {
            let base = lemma5_log_ratio(a, b, c, d).unwrap();
            let scaled = lemma5_log_ratio(lam * a, lam * b, lam * c, lam * d).unwrap();
            prop_assert!((scaled - lam * base).abs() < 1e-12 * lam.max(1.0) * (1.0 + base.abs()));
        }
    }
}
