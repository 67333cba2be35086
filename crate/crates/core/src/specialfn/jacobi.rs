//! Jacobi polynomials `P_n^{(alpha, beta)}(x)`.
//!
//! The three-term recurrence in `n` is the default path. When a recurrence
//! denominator vanishes (this happens for some negative integer parameters,
//! which the monopole harmonics produce) the explicit finite sum obtained
//! from the Rodrigues formula by the Leibniz rule is used instead:
//!
//! ```text
//! P_n(x) = sum_s C(n+alpha, n-s) C(n+beta, s) ((x-1)/2)^s ((x+1)/2)^(n-s)
//! ```
//!
//! which is a polynomial identity in `alpha` and `beta`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiPoly {
    pub n: u64,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiPoly {
    pub fn new(n: i64, alpha: f64, beta: f64) -> Result<Self> {
        if n < 0 {
            return Err(Error::InvalidDegree(n));
        }
        Ok(JacobiPoly {
            n: n as u64,
            alpha,
            beta,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        recurrence(self.n, self.alpha, self.beta, x)
            .unwrap_or_else(|| explicit_sum(self.n, self.alpha, self.beta, x))
    }

    /// `d/dx P_n^{(a,b)} = (n + a + b + 1)/2 * P_{n-1}^{(a+1,b+1)}`.
    pub fn derivative_at(&self, x: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let lower = JacobiPoly {
            n: self.n - 1,
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        };
        0.5 * (self.n as f64 + self.alpha + self.beta + 1.0) * lower.eval(x)
    }

    /// `P_n(1) = C(n + alpha, n)`.
    pub fn value_at_one(&self) -> f64 {
        generalized_binomial(self.n as f64 + self.alpha, self.n)
    }
}

/// Evaluates `P_n^{(alpha, beta)}(x)`.
pub fn jacobi_eval(n: i64, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    Ok(JacobiPoly::new(n, alpha, beta)?.eval(x))
}

/// `C(z, k) = z (z-1) ... (z-k+1) / k!` for real `z`.
pub fn generalized_binomial(z: f64, k: u64) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (z - j as f64) / (j as f64 + 1.0);
    }
    acc
}

fn recurrence(n: u64, a: f64, b: f64, x: f64) -> Option<f64> {
    let mut p0 = 1.0;
    if n == 0 {
        return Some(p0);
    }
    let mut p1 = (a + 1.0) + (a + b + 2.0) * 0.5 * (x - 1.0);
    let ab = a + b;
    for k in 2..=n {
        let k = k as f64;
        let c1 = k + ab;
        let c2 = 2.0 * k + ab - 2.0;
        if c1.abs() < 1e-10 || c2.abs() < 1e-10 {
            return None;
        }
        let denom = 2.0 * k * c1 * c2;
        let lin = (2.0 * k + ab - 1.0) * ((2.0 * k + ab) * c2 * x + a * a - b * b);
        let back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + ab);
        let p2 = (lin * p1 - back * p0) / denom;
        p0 = p1;
        p1 = p2;
    }
    Some(p1)
}

pub(crate) fn explicit_sum(n: u64, a: f64, b: f64, x: f64) -> f64 {
    let u = 0.5 * (x - 1.0);
    let w = 0.5 * (x + 1.0);
    let nf = n as f64;
    (0..=n)
        .map(|s| {
            generalized_binomial(nf + a, n - s)
                * generalized_binomial(nf + b, s)
                * u.powi(s as i32)
                * w.powi((n - s) as i32)
        })
        .sum()
}
