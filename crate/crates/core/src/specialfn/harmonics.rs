//! Monopole spherical harmonics in the two-chart representation.
//!
//! On the chart `+` (sphere minus the south pole) and the chart `-` (sphere
//! minus the north pole) the section `Y_qlm` is represented by
//!
//! ```text
//! (Y_qlm)_± = M_qlm (1-x)^(alpha/2) (1+x)^(beta/2) P_n^{(alpha,beta)}(x) exp(i (m ± q) phi)
//! alpha = -q - m,  beta = q - m,  n = l + m,  x = cos(theta)
//! ```
//!
//! The weight `(1-x)^(alpha/2) (1+x)^(beta/2)` is what makes `Y_qlm` an
//! eigen-section of the monopole Laplacian. Because `alpha` and `beta` are
//! integers that may be negative, the Jacobi factor carries explicit powers
//! of `(x-1)/2` and `(x+1)/2` which are pulled out analytically so that the
//! profile is evaluated with non-negative exponents only:
//!
//! ```text
//! (1-x)^(alpha/2) (1+x)^(beta/2) P_n = (-1)^s0 2^-(s0+t0) (1-x)^(|alpha|/2) (1+x)^(|beta|/2) R(x)
//! ```
//!
//! with `s0 = max(0, -alpha)`, `t0 = max(0, -beta)` and `R` a polynomial.
//! `M_qlm > 0` is fixed by unit norm on the sphere. The two charts differ by
//! the transition function [`overlap_phase`], `exp(2 i q phi)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::specialfn::jacobi::generalized_binomial;

/// Which local trivialization a section value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Covers everything except the south pole `theta = pi`.
    Plus,
    /// Covers everything except the north pole `theta = 0`.
    Minus,
}

impl Chart {
    pub fn sign(self) -> f64 {
        match self {
            Chart::Plus => 1.0,
            Chart::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chart::Plus => "plus",
            Chart::Minus => "minus",
        }
    }

    /// Excluded pole, `theta = pi/2 ± pi/2`.
    pub fn excluded_pole(self) -> f64 {
        match self {
            Chart::Plus => PI,
            Chart::Minus => 0.0,
        }
    }
}

/// How close to the excluded pole a point is still considered on it.
pub const POLE_TOL: f64 = 1e-12;

/// `Y_qlm` in one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSection {
    pub two_q: i64,
    pub two_l: u64,
    pub two_m: i64,
    pub norm_const: f64,
    pub chart: Chart,
    alpha: i64,
    beta: i64,
    /// Coefficients of `R` as `(coefficient, power of (x-1)/2, power of (x+1)/2)`.
    reduced: Vec<(f64, i32, i32)>,
    /// `(-1)^s0 2^-(s0+t0)`
    prefactor: f64,
}

impl HarmonicSection {
    pub fn new(two_q: i64, two_l: u64, two_m: i64, chart: Chart) -> Result<Self> {
        let two_l_i = two_l as i64;
        if two_l_i < two_q.abs() || (two_l_i - two_q.abs()) % 2 != 0 {
            return Err(Error::DomainError(format!(
                "2l = {two_l} not admissible for 2q = {two_q}"
            )));
        }
        if two_m.abs() > two_l_i || (two_l_i - two_m) % 2 != 0 {
            return Err(Error::DomainError(format!(
                "2m = {two_m} not admissible for 2l = {two_l}"
            )));
        }
        let alpha = -(two_q + two_m) / 2;
        let beta = (two_q - two_m) / 2;
        let n = (two_l_i + two_m) / 2;
        let l_minus_q = (two_l_i - two_q) / 2;
        let l_plus_q = (two_l_i + two_q) / 2;
        let s0 = (-alpha).max(0);
        let t0 = (-beta).max(0);
        let s_hi = n.min(l_plus_q);
        let mut reduced = Vec::new();
        for s in s0..=s_hi {
            if n - s - t0 < 0 {
                continue;
            }
            let c = generalized_binomial(l_minus_q as f64, (n - s) as u64)
                * generalized_binomial(l_plus_q as f64, s as u64);
            if c != 0.0 {
                reduced.push((c, (s - s0) as i32, (n - s - t0) as i32));
            }
        }
        let sign = if s0 % 2 == 0 { 1.0 } else { -1.0 };
        let prefactor = sign * 0.5f64.powi((s0 + t0) as i32);

        let mut section = HarmonicSection {
            two_q,
            two_l,
            two_m,
            norm_const: 1.0,
            chart,
            alpha,
            beta,
            reduced,
            prefactor,
        };
        section.norm_const = 1.0 / section.unnormalized_norm_sq().sqrt();
        Ok(section)
    }

    /// The same harmonic in the other chart.
    pub fn in_chart(&self, chart: Chart) -> Self {
        HarmonicSection {
            chart,
            ..self.clone()
        }
    }

    /// Jacobi parameters `(alpha, beta)` and degree `n`.
    pub fn jacobi_indices(&self) -> (i64, i64, i64) {
        (self.alpha, self.beta, (self.two_l as i64 + self.two_m) / 2)
    }

    fn reduced_poly(&self, x: f64) -> f64 {
        let u = 0.5 * (x - 1.0);
        let w = 0.5 * (x + 1.0);
        self.reduced
            .iter()
            .map(|&(c, pu, pw)| c * u.powi(pu) * w.powi(pw))
            .sum()
    }

    /// `2 pi * integral over x of the squared unnormalized profile`; the
    /// integrand is a polynomial, so a rule of sufficient order is exact.
    fn unnormalized_norm_sq(&self) -> f64 {
        let deg_r = self
            .reduced
            .iter()
            .map(|&(_, a, b)| (a + b) as usize)
            .max()
            .unwrap_or(0);
        let degree = self.alpha.unsigned_abs() as usize + self.beta.unsigned_abs() as usize + 2 * deg_r;
        let rule = GaussLegendre::new(degree / 2 + 2);
        let (ka, kb) = (self.alpha.unsigned_abs() as i32, self.beta.unsigned_abs() as i32);
        let integral = rule.integrate(-1.0, 1.0, |x| {
            let r = self.prefactor * self.reduced_poly(x);
            (1.0 - x).powi(ka) * (1.0 + x).powi(kb) * r * r
        });
        2.0 * PI * integral
    }

    /// The real polar profile `M (1-x)^(alpha/2) (1+x)^(beta/2) P_n(x)` at
    /// `x = cos(theta)`; identical in both charts.
    pub fn polar_profile(&self, theta: f64) -> f64 {
        let x = theta.cos();
        // 1 - cos = 2 sin^2(theta/2), 1 + cos = 2 cos^2(theta/2)
        let sqrt_one_minus = std::f64::consts::SQRT_2 * (0.5 * theta).sin().abs();
        let sqrt_one_plus = std::f64::consts::SQRT_2 * (0.5 * theta).cos().abs();
        self.norm_const
            * self.prefactor
            * sqrt_one_minus.powi(self.alpha.unsigned_abs() as i32)
            * sqrt_one_plus.powi(self.beta.unsigned_abs() as i32)
            * self.reduced_poly(x)
    }

    /// `(Y_qlm)_±(theta, phi)` in this section's chart.
    pub fn eval(&self, theta: f64, phi: f64) -> Result<Complex64> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::DomainError(format!("theta = {theta} outside [0, pi]")));
        }
        if (theta - self.chart.excluded_pole()).abs() <= POLE_TOL {
            return Err(Error::OutOfChart {
                theta,
                chart: self.chart.name(),
            });
        }
        let phase = 0.5 * (self.two_m as f64 + self.chart.sign() * self.two_q as f64) * phi;
        Ok(Complex64::from_polar(1.0, phase) * self.polar_profile(theta))
    }
}

/// Transition function between the charts, `(Y)_+ = overlap_phase * (Y)_-`,
/// with the reference angle set to zero.
pub fn overlap_phase(two_q: i64, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, two_q as f64 * phi)
}

/// Product rule on the sphere: Gauss–Legendre in `cos(theta)` times the
/// trapezoid rule in `phi`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub theta_rule: GaussLegendre,
    pub n_phi: usize,
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        SphereQuadrature::new(64, 128)
    }
}

impl SphereQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        SphereQuadrature {
            theta_rule: GaussLegendre::new(n_theta),
            n_phi,
        }
    }

    /// `<a, b> = integral of conj(a) b over the sphere`. Both sections must
    /// use the same chart; nodes never land on a pole.
    pub fn inner(&self, a: &HarmonicSection, b: &HarmonicSection) -> Result<Complex64> {
        if a.chart != b.chart {
            return Err(Error::DomainError("sections live in different charts".into()));
        }
        let dphi = 2.0 * PI / self.n_phi as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.theta_rule.nodes.iter().zip(&self.theta_rule.weights) {
            let theta = x.acos();
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..self.n_phi {
                let phi = j as f64 * dphi;
                row += a.eval(theta, phi)?.conj() * b.eval(theta, phi)?;
            }
            acc += row * (w * dphi);
        }
        Ok(acc)
    }
}
