use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a cell picks `k` from its size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "rule")]
pub enum KRule {
    Explicit {
        k: usize,
    },
    /// `max(1, ⌊c·n^l⌋)`
    Power {
        c: f64,
        l: f64,
    },
}

/// Resolves `rule` at size `n`, rejecting `k > n`.
pub fn k_from_rule(rule: KRule, n: usize) -> Result<usize> {
    let k = match rule {
        KRule::Explicit { k } => k,
        KRule::Power { c, l } => {
            if !(c > 0.0 && c.is_finite() && l.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "bad k rule c = {c}, l = {l}"
                )));
            }
            ((c * (n as f64).powf(l)).floor() as usize).max(1)
        }
    };
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_rule_floors_with_minimum_one() {
        assert_eq!(
            k_from_rule(KRule::Power { c: 1.0, l: 0.44 }, 1000).unwrap(),
            20
        );
        assert_eq!(
            k_from_rule(KRule::Power { c: 0.01, l: 0.3 }, 10).unwrap(),
            1
        );
        assert_eq!(
            k_from_rule(KRule::Power { c: 2.5, l: 0.5 }, 10_000).unwrap(),
            250
        );
        assert!(k_from_rule(KRule::Explicit { k: 11 }, 10).is_err());
        assert!(k_from_rule(KRule::Power { c: -1.0, l: 0.5 }, 10).is_err());
    }
}
