//! Shooting eigensolver for the radial equation, independent of the closed
//! form.
//!
//! The equation in `x`,
//!
//! ```text
//! Q'' + (2/x) Q' + { [eps x + 2 Z alpha (1-x)]^2 - mu^2 x^2 - 4 L (1-x) } Q / (4 x^2 (1-x)^2) = 0
//! ```
//!
//! with `L = l(l+1) - q^2`, becomes `Q_ss + Q_s + P(x) Q / 4 = 0` in the logit
//! `s = ln(x/(1-x))`, where `P` is the brace above. The coefficients are
//! bounded in `s`, so an explicit Runge–Kutta pair handles both singular
//! endpoints without special treatment. Integration starts from the
//! Frobenius series `x^(kappa - 1/2)(1 + O(x))` near `x = 0`. Near `x = 1`
//! the solution is `a t^((1+lambda)/2) + b t^((1-lambda)/2)` with `t = 1-x`;
//! the coefficient `b` of the non-normalizable branch is the mismatch, and
//! eigenvalues are its zeros in `eps`.
//!
//! Roots are counted before they are refined. The node count of `Q` plus one
//! when `b` and `Q(x_max)` have opposite signs increases by exactly one each
//! time `eps` crosses an eigenvalue, so the number of roots in an interval is
//! the difference of the counts at its ends.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::DimensionlessParams;
use crate::quantum_numbers::{kappa, DEFAULT_MAX_LEVELS};
use crate::spectrum::build_spectrum;

/// Truncation, tolerances and search window of the shooting method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub x_min: f64,
    pub x_max: f64,
    /// Cap on accepted plus rejected Runge–Kutta steps per shot.
    pub max_steps: usize,
    /// Relative tolerance of the step control.
    pub rtol: f64,
    /// Distance of the default window from `Z alpha` and `sqrt(mu^2 + 1)`.
    pub bracket_pad: f64,
    /// Absolute tolerance on each refined `eps`.
    pub tol: f64,
    /// Search window; `None` selects `(Z alpha + pad, sqrt(mu^2 + 1) - pad)`.
    pub eps_bracket: Option<(f64, f64)>,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            x_min: 1e-8,
            x_max: 1.0 - 1e-10,
            max_steps: 200_000,
            rtol: 1e-12,
            bracket_pad: 1e-6,
            tol: 1e-10,
            eps_bracket: None,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.x_min && self.x_min < self.x_max && self.x_max < 1.0) {
            return Err(Error::InvalidParams(format!(
                "need 0 < x_min < x_max < 1, got {} and {}",
                self.x_min, self.x_max
            )));
        }
        if !(self.tol > 0.0 && self.rtol > 0.0 && self.bracket_pad >= 0.0) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// The search window in `eps` for these parameters.
    pub fn bracket(&self, params: &DimensionlessParams) -> (f64, f64) {
        self.eps_bracket.unwrap_or((
            params.z_alpha + self.bracket_pad,
            (params.mu * params.mu + 1.0).sqrt() - self.bracket_pad,
        ))
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootResult {
    /// Coefficient of the non-normalizable branch, relative to the largest
    /// amplitude the solution reaches in the same frame.
    pub mismatch: f64,
    /// Sign changes of `Q` on `(x_min, x_max)`, not counting crossovers
    /// produced by the non-normalizable branch near `x_max`.
    pub node_count: usize,
    /// All sign changes of `Q`, plus one when the mismatch and `Q(x_max)`
    /// differ in sign. Increases by one across each eigenvalue.
    pub augmented_count: usize,
}

struct Radial {
    eps: f64,
    za: f64,
    mu: f64,
    ang: f64,
}

impl Radial {
    fn quarter_p(&self, s: f64) -> f64 {
        let (x, t) = logistic(s);
        let a = self.eps * x + 2.0 * self.za * t;
        0.25 * (a * a - self.mu * self.mu * x * x - 4.0 * self.ang * t)
    }

    fn rhs(&self, s: f64, y: [f64; 2]) -> [f64; 2] {
        [y[1], -y[1] - self.quarter_p(s) * y[0]]
    }
}

/// `(x, 1 - x)` at logit `s`.
fn logistic(s: f64) -> (f64, f64) {
    if s >= 0.0 {
        let e = (-s).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = s.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    }
}

/// `ln(1 - x)` at logit `s`.
fn logistic_ln_t(s: f64) -> f64 {
    if s > 0.0 {
        -s - (-s).exp().ln_1p()
    } else {
        -s.exp().ln_1p()
    }
}

/// `(Q, dQ/ds)` of the regular Frobenius solution at `x`, divided by `x^sigma`.
fn frobenius(sigma: f64, r: &Radial, x: f64) -> Result<(f64, f64)> {
    let p0 = 4.0 * r.za * r.za - 4.0 * r.ang;
    let p1 = 4.0 * r.za * (r.eps - 2.0 * r.za) + 4.0 * r.ang;
    let p2 = (r.eps - 2.0 * r.za).powi(2) - r.mu * r.mu;
    let f = |a: f64, b: f64, p: f64, e: f64| a * e * (e - 1.0) + b * e + 0.25 * p;
    let f0 = |e: f64| f(1.0, 2.0, p0, e);
    let f1 = |e: f64| f(-2.0, -4.0, p1, e);
    let f2 = |e: f64| f(1.0, 2.0, p2, e);
    let (mut c_prev, mut c_cur) = (0.0, 1.0);
    let (mut sum, mut dsum) = (1.0, sigma);
    let mut xk = 1.0;
    for k in 1..200 {
        let e = sigma + k as f64;
        let denom = f0(e);
        if denom.abs() < 1e-300 {
            return Err(Error::DomainError("Frobenius recurrence is singular".into()));
        }
        let c = -(c_cur * f1(e - 1.0) + c_prev * f2(e - 2.0)) / denom;
        xk *= x;
        sum += c * xk;
        dsum += c * e * xk;
        c_prev = c_cur;
        c_cur = c;
        if (c * xk).abs() < 1e-18 * sum.abs() && k > 2 {
            // dQ/ds = x (1 - x) dQ/dx; dsum holds x dQ/dx / x^sigma
            return Ok((sum, (1.0 - x) * dsum));
        }
    }
    Err(Error::NoConvergence { terms: 200 })
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: [f64; 2], terms: &[(f64, [f64; 2])], h: f64) -> [f64; 2] {
    let mut out = y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One Dormand–Prince step; returns the new state, its derivative and the
/// embedded error estimate.
fn dopri_step(r: &Radial, s: f64, y: [f64; 2], k1: [f64; 2], h: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let k2 = r.rhs(s + C2 * h, axpy(y, &[(A21, k1)], h));
    let k3 = r.rhs(s + C3 * h, axpy(y, &[(A31, k1), (A32, k2)], h));
    let k4 = r.rhs(s + C4 * h, axpy(y, &[(A41, k1), (A42, k2), (A43, k3)], h));
    let k5 = r.rhs(s + C5 * h, axpy(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], h));
    let k6 = r.rhs(
        s + h,
        axpy(y, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)], h),
    );
    let y_new = axpy(y, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)], h);
    let k7 = r.rhs(s + h, y_new);
    let err = axpy([0.0; 2], &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)], h);
    (y_new, k7, err)
}

/// Integrates the radial equation at trial energy `eps` for angular number
/// `l = two_l / 2`.
pub fn shoot(eps: f64, two_l: u64, params: &DimensionlessParams, cfg: &ShootingConfig) -> Result<ShootResult> {
    cfg.validate()?;
    let (za, mu) = (params.z_alpha, params.mu);
    let lambda_sq = mu * mu + 1.0 - eps * eps;
    if !(lambda_sq > 0.0) {
        return Err(Error::BranchError { lambda_sq });
    }
    let lambda = lambda_sq.sqrt();
    let kap = kappa(two_l, params.two_q, za)?;
    let l = 0.5 * two_l as f64;
    let q = params.q();
    let radial = Radial {
        eps,
        za,
        mu,
        ang: l * (l + 1.0) - q * q,
    };

    let s_start = cfg.x_min.ln() - (-cfg.x_min).ln_1p();
    let s_end = cfg.x_max.ln() - (-cfg.x_max).ln_1p();
    let fit_from = s_end - std::f64::consts::LN_10;
    let h_max = (s_end - fit_from) / 16.0;

    let (q0, dq0) = frobenius(kap - 0.5, &radial, cfg.x_min)?;
    let norm0 = q0.hypot(dq0);
    let mut y = [q0 / norm0, dq0 / norm0];
    // Q = exp(ln_scale) * y[0]
    let mut ln_scale = 0.0;
    let mut s = s_start;
    let mut k1 = radial.rhs(s, y);
    let mut h: f64 = 1e-3;
    let mut nodes = 0usize;
    let mut node_at: Vec<(f64, f64, f64)> = Vec::new();
    let mut last_sign = y[0].signum();
    let mut tail: Vec<(f64, f64, [f64; 2])> = Vec::new();
    let mut steps = 0usize;
    // largest ln(|state| t^-r) seen so far; the scale of the normalizable part
    let mut peak = f64::NEG_INFINITY;

    let p_exp = 0.5 * (1.0 + lambda);
    let r_exp = 0.5 * (1.0 - lambda);

    while s < s_end {
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::StiffnessFailure(format!(
                "more than {} steps at eps = {eps}",
                cfg.max_steps
            )));
        }
        let h_try = h.min(h_max).min(s_end - s);
        let (y_new, k_new, err) = dopri_step(&radial, s, y, k1, h_try);
        let scale = |i: usize| cfg.rtol * (1.0 + y[i].abs().max(y_new[i].abs()));
        let e = ((err[0] / scale(0)).powi(2) + (err[1] / scale(1)).powi(2)).sqrt() / std::f64::consts::SQRT_2;
        if !e.is_finite() {
            return Err(Error::StiffnessFailure(format!("non-finite state at s = {s}")));
        }
        let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
        if e > 1.0 {
            h = h_try * factor;
            if h < 1e-14 * (1.0 + s.abs()) {
                return Err(Error::StiffnessFailure(format!("step size underflow at s = {s}")));
            }
            continue;
        }
        s += h_try;
        let norm = y_new[0].hypot(y_new[1]);
        y = [y_new[0] / norm, y_new[1] / norm];
        k1 = [k_new[0] / norm, k_new[1] / norm];
        ln_scale += norm.ln();
        peak = peak.max(ln_scale - r_exp * logistic_ln_t(s));
        h = h_try * factor;

        let sign = y[0].signum();
        if y[0] != 0.0 {
            if sign != last_sign {
                nodes += 1;
                node_at.push((s, ln_scale, y[1]));
            }
            last_sign = sign;
        }
        if s >= fit_from {
            tail.push((s, ln_scale, y));
        }
    }

    // b t^r = (Q_s / x + p Q) / lambda, since d/ds t^p = -p x t^p.
    let (s_last, ln_last, y_last) = *tail.last().ok_or_else(|| {
        Error::StiffnessFailure("no accepted step inside the fitting window".into())
    })?;
    let t_last = logistic(s_last).1;
    let mut sums = [0.0; 5];
    for &(si, ln_i, yi) in &tail {
        let (xi, ti) = logistic(si);
        let rel = (ln_i - ln_last).exp() * (ti / t_last).powf(-r_exp);
        let b = rel * (yi[1] / xi + p_exp * yi[0]) / lambda;
        // least squares for b = beta + c t
        let tt = ti / t_last;
        sums[0] += 1.0;
        sums[1] += tt;
        sums[2] += tt * tt;
        sums[3] += b;
        sums[4] += b * tt;
    }
    let det = sums[0] * sums[2] - sums[1] * sums[1];
    let beta = if det.abs() > 1e-12 * sums[0] * sums[2] {
        (sums[3] * sums[2] - sums[1] * sums[4]) / det
    } else {
        sums[3] / sums[0]
    };
    let ln_b = beta.abs().ln() + ln_last - r_exp * t_last.ln();
    let mismatch = beta.signum() * (ln_b - peak).exp();
    // At a crossover node of a t^p + b t^r one has |Q_s| / (lambda x) = |b| t^r;
    // a node with that property belongs to the non-normalizable branch.
    let ln_bt = |si: f64| ln_b + r_exp * logistic_ln_t(si);
    let tail_nodes = node_at
        .iter()
        .filter(|&&(si, ln_i, dq)| {
            let (xi, _) = logistic(si);
            let ln_slope = dq.abs().ln() + ln_i - (lambda * xi).ln();
            beta != 0.0 && ln_bt(si) >= ln_slope - std::f64::consts::LN_10
        })
        .count();
    let disagree = mismatch != 0.0 && y_last[0] != 0.0 && mismatch.signum() != y_last[0].signum();
    Ok(ShootResult {
        mismatch,
        node_count: nodes - tail_nodes,
        augmented_count: nodes + disagree as usize,
    })
}

/// Brent's method on `f` over `[a, b]` with `f(a) f(b) < 0`.
fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> Result<f64> {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() <= tol {
            return Ok(b);
        }
        let mut step = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let out_of_range = !((step > lo.min(b)) && (step < lo.max(b)));
        let slow = if bisected {
            (step - b).abs() >= 0.5 * (b - c).abs() || (b - c).abs() < tol
        } else {
            (step - b).abs() >= 0.5 * (c - d).abs() || (c - d).abs() < tol
        };
        if out_of_range || slow {
            step = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(step)?;
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = step;
            fb = fs;
        } else {
            a = step;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(b)
}

/// All eigenvalues for angular number `two_l / 2` inside the configured
/// window, ascending.
pub fn find_eigenvalues(two_l: u64, params: &DimensionlessParams, cfg: &ShootingConfig) -> Result<Vec<f64>> {
    let (lo, hi) = cfg.bracket(params);
    find_eigenvalues_in(two_l, params, cfg, lo, hi)
}

/// All eigenvalues in `(lo, hi)`, ascending.
pub fn find_eigenvalues_in(
    two_l: u64,
    params: &DimensionlessParams,
    cfg: &ShootingConfig,
    lo: f64,
    hi: f64,
) -> Result<Vec<f64>> {
    if !(lo < hi) {
        return Ok(Vec::new());
    }
    let shot = |eps: f64| shoot(eps, two_l, params, cfg);
    let mut roots = Vec::new();
    let mut stack = vec![(lo, shot(lo)?, hi, shot(hi)?)];
    while let Some((a, ra, b, rb)) = stack.pop() {
        let count = rb.augmented_count.saturating_sub(ra.augmented_count);
        if count == 0 {
            continue;
        }
        if count == 1 && ra.mismatch * rb.mismatch < 0.0 {
            let root = brent(|e| Ok(shot(e)?.mismatch), a, b, ra.mismatch, rb.mismatch, cfg.tol)?;
            roots.push(root);
            continue;
        }
        if b - a <= cfg.tol {
            roots.extend(std::iter::repeat_n(0.5 * (a + b), count));
            continue;
        }
        let m = 0.5 * (a + b);
        let rm = shot(m)?;
        stack.push((m, rm, b, rb));
        stack.push((a, ra, m, rm));
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Comparison of the closed-form spectrum with the oracle for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub levels_checked: usize,
    /// Largest `|eps_oracle - eps_formula| / eps_formula` over matched levels;
    /// infinite when a level has no oracle partner.
    pub max_rel_err: f64,
    /// No oracle root without a closed-form partner, none below the window,
    /// and no closed-form level without an oracle root.
    pub completeness_ok: bool,
    /// Oracle roots with no closed-form partner, as `(two_l, eps)`.
    pub extra_roots: Vec<(u64, f64)>,
    /// Closed-form levels with no oracle root, as `(n, two_l)`.
    pub missing: Vec<(u64, u64)>,
}

/// Checks every closed-form level of `params` against oracle roots, for
/// every admissible `l` up to one step past the largest bound `l`, and
/// scans `[0, Z alpha]` at the lowest `l` for roots that should not exist.
pub fn verify_spectrum(params: &DimensionlessParams, cfg: &ShootingConfig, match_tol: f64) -> Result<VerifyReport> {
    let spectrum = build_spectrum(params, None, DEFAULT_MAX_LEVELS)?;
    if spectrum.truncated {
        return Err(Error::InvalidParams("spectrum too large to verify".into()));
    }
    let lowest = params.two_q_abs();
    let top = spectrum
        .levels
        .iter()
        .map(|l| l.qn.two_l)
        .max()
        .unwrap_or(lowest);
    let mut report = VerifyReport {
        levels_checked: 0,
        max_rel_err: 0.0,
        completeness_ok: true,
        extra_roots: Vec::new(),
        missing: Vec::new(),
    };
    let mut two_l = lowest;
    while two_l <= top + 2 {
        let mut formula: Vec<_> = spectrum.levels.iter().filter(|l| l.qn.two_l == two_l).collect();
        formula.sort_by_key(|l| l.qn.n);
        let mut roots = find_eigenvalues(two_l, params, cfg)?;
        for lvl in formula {
            report.levels_checked += 1;
            let best = roots
                .iter()
                .enumerate()
                .map(|(i, r)| (i, (r - lvl.eps).abs() / lvl.eps))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, err)) if err < match_tol => {
                    report.max_rel_err = report.max_rel_err.max(err);
                    roots.remove(i);
                }
                _ => {
                    report.max_rel_err = f64::INFINITY;
                    report.missing.push((lvl.qn.n, two_l));
                }
            }
        }
        report.extra_roots.extend(roots.into_iter().map(|r| (two_l, r)));
        two_l += 2;
    }
    let (lo, _) = cfg.bracket(params);
    let below = find_eigenvalues_in(lowest, params, cfg, 0.0, lo)?;
    report.extra_roots.extend(below.into_iter().map(|r| (lowest, r)));
    report.completeness_ok = report.extra_roots.is_empty() && report.missing.is_empty();
    Ok(report)
}
