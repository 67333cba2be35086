//! Admissible quantum numbers and the caps that make the spectrum finite.
//!
//! Angular numbers are half-integers and are stored doubled (`two_l`,
//! `two_m`, `two_q`) so that every admissibility test is an integer test.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DimensionlessParams;

/// Default cap on the number of enumerated levels.
pub const DEFAULT_MAX_LEVELS: usize = 1_000_000;

/// Label of a level: radial number `n`, angular number `l = two_l / 2`,
/// charge product `q = two_q / 2`. The azimuthal number is not part of the
/// label since the energy does not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: u64,
    pub two_l: u64,
    pub two_q: i64,
}

impl QuantumNumbers {
    pub fn new(n: u64, two_l: u64, two_q: i64) -> Result<Self> {
        let two_q_abs = two_q.unsigned_abs();
        if two_l < two_q_abs || !(two_l - two_q_abs).is_multiple_of(2) {
            return Err(Error::DomainError(format!(
                "l = {}/2 is not in |q|, |q|+1, ... for 2q = {two_q}",
                two_l
            )));
        }
        Ok(QuantumNumbers { n, two_l, two_q })
    }

    pub fn l(&self) -> f64 {
        0.5 * self.two_l as f64
    }

    pub fn q(&self) -> f64 {
        0.5 * self.two_q as f64
    }

    /// Number of azimuthal states, `2l + 1`.
    pub fn degeneracy(&self) -> u64 {
        self.two_l + 1
    }

    /// Admissible doubled azimuthal numbers `-2l, -2l + 2, ..., 2l`.
    pub fn two_m_values(&self) -> impl Iterator<Item = i64> {
        let two_l = self.two_l as i64;
        (0..=self.two_l).map(move |k| -two_l + 2 * k as i64)
    }

    /// `l(l+1) - q^2`, the eigenvalue of minus the monopole Laplacian.
    pub fn angular_eigenvalue(&self) -> f64 {
        let l = self.l();
        let q = self.q();
        l * (l + 1.0) - q * q
    }

    pub fn kappa(&self, z_alpha: f64) -> Result<f64> {
        kappa(self.two_l, self.two_q, z_alpha)
    }

    pub fn principal(&self, z_alpha: f64) -> Result<f64> {
        Ok(principal_number(self.n, self.kappa(z_alpha)?))
    }
}

/// `kappa = sqrt((l + 1/2)^2 - (Z alpha)^2 - q^2)`.
pub fn kappa(two_l: u64, two_q: i64, z_alpha: f64) -> Result<f64> {
    let two_q_abs = two_q.unsigned_abs();
    if two_l < two_q_abs || !(two_l - two_q_abs).is_multiple_of(2) {
        return Err(Error::DomainError(format!(
            "2l = {two_l} is not admissible for 2q = {two_q}"
        )));
    }
    let l_half = 0.5 * two_l as f64 + 0.5;
    let q = 0.5 * two_q as f64;
    // (l + 1/2)^2 - q^2 = (l + 1/2 - |q|)(l + 1/2 + |q|) avoids cancellation for large l.
    let radicand = (l_half - q.abs()) * (l_half + q.abs()) - z_alpha * z_alpha;
    if !(radicand > 0.0) {
        return Err(Error::DomainError(format!(
            "kappa radicand {radicand} is not positive"
        )));
    }
    Ok(radicand.sqrt())
}

/// `N = n + kappa + 1/2`.
pub fn principal_number(n: u64, kappa: f64) -> f64 {
    n as f64 + kappa + 0.5
}

/// Caps on the principal number and on the charge product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBounds {
    /// `N0 = sqrt(Z alpha (sqrt(mu^2 + 1) - Z alpha))`.
    pub n0_cap: f64,
    /// `|q|_0 = N0^2 - N0 + (Z alpha)^2`, reported as zero when `N0 <= 1/2`.
    pub q0_cap: f64,
    /// True when no level exists for any `q`.
    pub empty: bool,
    pub z_alpha: f64,
}

impl SpectrumBounds {
    /// Whether any level exists for this charge product.
    pub fn admits(&self, two_q: i64) -> bool {
        !self.empty && 0.5 * (two_q.unsigned_abs() as f64) < self.q0_cap
    }

    /// `l0(|q|)`: the largest admissible `l`, or `None` when no `l` qualifies.
    /// Returned as a float because at cosmological scale it exceeds `u64`.
    pub fn max_l(&self, two_q: i64) -> Option<f64> {
        if !self.admits(two_q) {
            return None;
        }
        let q_abs = 0.5 * two_q.unsigned_abs() as f64;
        let bound = -0.5 + (0.25 + self.q0_cap + q_abs * q_abs).sqrt();
        // largest l = |q| + k with l < bound
        let mut k = (bound - q_abs).ceil() - 1.0;
        let fails = |k: f64| {
            let l = q_abs + k;
            l * (l + 1.0) - q_abs * q_abs >= self.q0_cap
        };
        while k >= 0.0 && fails(k) {
            k -= 1.0;
        }
        while !fails(k + 1.0) && k + 1.0 < 1e15 {
            k += 1.0;
        }
        (k >= 0.0).then_some(q_abs + k)
    }

    /// `n0(l, |q|)`: the largest admissible `n`, or `None`.
    pub fn max_n(&self, two_l: u64, two_q: i64) -> Option<f64> {
        if self.empty {
            return None;
        }
        let kappa = kappa(two_l, two_q, self.z_alpha).ok()?;
        let room = self.n0_cap - kappa - 0.5;
        if room <= 0.0 {
            return None;
        }
        let mut n = room.ceil() - 1.0;
        if n + kappa + 0.5 >= self.n0_cap {
            n -= 1.0;
        }
        (n >= 0.0).then_some(n)
    }
}

pub fn spectrum_caps(mu: f64, z_alpha: f64) -> SpectrumBounds {
    let n0_cap = (z_alpha * ((mu * mu + 1.0).sqrt() - z_alpha)).max(0.0).sqrt();
    let empty = n0_cap <= 0.5;
    let q0_cap = if empty {
        0.0
    } else {
        n0_cap * n0_cap - n0_cap + z_alpha * z_alpha
    };
    SpectrumBounds {
        n0_cap,
        q0_cap,
        empty,
        z_alpha,
    }
}

/// Result of [`enumerate_levels`].
#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    pub levels: Vec<QuantumNumbers>,
    pub truncated: bool,
    pub bounds: SpectrumBounds,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    principal: f64,
    two_l: u64,
    n: u64,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.principal
            .total_cmp(&other.principal)
            .then(self.two_l.cmp(&other.two_l))
            .then(self.n.cmp(&other.n))
    }
}

/// Lists every `(n, l)` with `N < N0`, ordered by `(N, l)`.
///
/// Levels are produced lazily in increasing `N`, so the cost is
/// proportional to `max_count` even when the full spectrum is astronomically
/// large.
pub fn enumerate_levels(params: &DimensionlessParams, max_count: usize) -> Enumeration {
    let bounds = spectrum_caps(params.mu, params.z_alpha);
    let mut out = Enumeration {
        levels: Vec::new(),
        truncated: false,
        bounds,
    };
    if bounds.empty || max_count == 0 {
        return out;
    }
    let two_q = params.two_q;
    let candidate = |n: u64, two_l: u64| -> Option<Candidate> {
        let kappa = kappa(two_l, two_q, params.z_alpha).ok()?;
        let principal = principal_number(n, kappa);
        (principal < bounds.n0_cap).then_some(Candidate {
            principal,
            two_l,
            n,
        })
    };

    let mut heap = BinaryHeap::new();
    if let Some(c) = candidate(0, params.two_q_abs()) {
        heap.push(Reverse(c));
    }
    while let Some(Reverse(c)) = heap.pop() {
        if out.levels.len() == max_count {
            out.truncated = true;
            break;
        }
        out.levels.push(QuantumNumbers {
            n: c.n,
            two_l: c.two_l,
            two_q,
        });
        if let Some(next) = candidate(c.n + 1, c.two_l) {
            heap.push(Reverse(next));
        }
        if c.n == 0 {
            if let Some(next) = candidate(0, c.two_l + 2) {
                heap.push(Reverse(next));
            }
        }
    }
    out
}
