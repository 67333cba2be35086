//! Gauss hypergeometric series `2F1(a, b; c; x)` on `[0, 1)`.

use crate::error::{Error, Result};

pub const MAX_TERMS: usize = 10_000;
pub const REL_TOL: f64 = 1e-13;

fn non_positive_integer(v: f64) -> Option<u64> {
    (v <= 0.0 && v == v.round()).then(|| (-v) as u64)
}

/// `2F1(a, b; c; x)` by direct summation.
///
/// A terminating series (`a` or `b` a non-positive integer) is summed
/// exactly. Otherwise terms are added until the geometric tail bound drops
/// below `REL_TOL` of the partial sum.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::DomainError(format!("2F1 argument {x} outside [0, 1)")));
    }
    let terminating = match (non_positive_integer(a), non_positive_integer(b)) {
        (Some(m), Some(k)) => Some(m.min(k)),
        (Some(m), None) | (None, Some(m)) => Some(m),
        (None, None) => None,
    };
    if let Some(c_pole) = non_positive_integer(c) {
        if terminating.is_none_or(|m| c_pole < m) {
            return Err(Error::DomainError(format!(
                "2F1 lower parameter c = {c} hits a pole before the series ends"
            )));
        }
    }

    if let Some(m) = terminating {
        if x > 0.5 {
            if let Some(v) = reflected_polynomial(a, b, c, m, x) {
                return Ok(v);
            }
        }
        return Ok(polynomial(a, b, c, m, x));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    if x == 0.0 {
        return Ok(1.0);
    }
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        term *= ratio;
        sum += term;
        let r = ratio.abs().max(x);
        if r < 1.0 && term.abs() * r / (1.0 - r) <= REL_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence { terms: MAX_TERMS })
}

fn polynomial(a: f64, b: f64, c: f64, m: u64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..m {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
    }
    sum
}

/// `F(-m, b; c; x) = (c-b)_m / (c)_m F(-m, b; b-c-m+1; 1-x)`, which avoids
/// the cancellation of the direct sum near `x = 1`. `None` when the new
/// lower parameter hits a pole.
fn reflected_polynomial(a: f64, b: f64, c: f64, m: u64, x: f64) -> Option<f64> {
    let other = if non_positive_integer(a) == Some(m) { b } else { a };
    let c_new = other - c - m as f64 + 1.0;
    if non_positive_integer(c_new).is_some_and(|p| p < m) {
        return None;
    }
    let ratio: f64 = (0..m).map(|k| (c - other + k as f64) / (c + k as f64)).product();
    Some(ratio * polynomial(-(m as f64), other, c_new, m, 1.0 - x))
}
