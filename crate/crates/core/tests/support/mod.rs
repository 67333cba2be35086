//! Test-side oracles shared by the integration tests and the acceptance run.
//! Each check returns a one-line summary on success and the first offending
//! case on failure.
#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;

use mesoatom::params::DimensionlessParams;
use mesoatom::quadrature::GaussLegendre;
use mesoatom::specialfn::{gauss_2f1, jacobi_eval, Chart, HarmonicSection, SphereQuadrature};
use mesoatom::spectrum::{build_spectrum, Level};
use mesoatom::wavefunction::{charge_functional, energy_functional, sobolev_norm, RadialProfile};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

pub fn dp(mu: f64, z_alpha: f64, two_q: i64) -> DimensionlessParams {
    DimensionlessParams::new(mu, z_alpha, two_q).unwrap()
}

/// `mu` in [2, 50], `Z alpha` in (0.02, 0.49), `2q` in [-4, 4].
pub fn random_params(rng: &mut impl Rng) -> DimensionlessParams {
    dp(rng.gen_range(2.0..=50.0), rng.gen_range(0.02..0.49), rng.gen_range(-4..=4))
}

pub fn bank(seed: u64, count: usize) -> Vec<DimensionlessParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_params(&mut rng)).collect()
}

/// Random parameter sets that have at least one level.
pub fn nonempty_bank(seed: u64, count: usize) -> Vec<(DimensionlessParams, Vec<Level>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let p = random_params(&mut rng);
        let s = build_spectrum(&p, None, 1000).unwrap();
        if !s.levels.is_empty() {
            out.push((p, s.levels));
        }
    }
    out
}

fn falling(z: f64, k: u64) -> f64 {
    (0..k).map(|j| z - j as f64).product()
}

fn factorial(k: u64) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Rodrigues' formula with the n-th derivative of the product expanded by
/// Leibniz' rule; also returns the sum of term magnitudes.
pub fn rodrigues(n: u64, a: f64, b: f64, x: f64) -> (f64, f64) {
    let (u, w) = (1.0 - x, 1.0 + x);
    let mut sum = 0.0;
    let mut mag = 0.0;
    for k in 0..=n {
        let binom = factorial(n) / (factorial(k) * factorial(n - k));
        // d^k (1-x)^(a+n) = (-1)^k (a+n)_k (1-x)^(a+n-k)
        let left = (-1f64).powi(k as i32) * falling(a + n as f64, k) * u.powf(a + n as f64 - k as f64);
        let right = falling(b + n as f64, n - k) * w.powf(b + k as f64);
        let term = binom * left * right;
        sum += term;
        mag += term.abs();
    }
    let pre = (-1f64).powi(n as i32) / (2f64.powi(n as i32) * factorial(n)) * u.powf(-a) * w.powf(-b);
    (pre * sum, (pre * mag).abs())
}

/// Three-term recurrence against Rodrigues and against the terminating
/// `binom(n + a, n) 2F1(-n, n + a + b + 1; a + 1; (1 - x)/2)`, relative 1e-10.
/// The reference scale is floored at 1e-3 of the Rodrigues term magnitude so
/// that values near a zero are judged against the size of what cancelled.
pub fn jacobi_agreement(seed: u64, cases: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let n = rng.gen_range(0..=10u64);
        let a = rng.gen_range(-0.9..3.0);
        let b = rng.gen_range(-0.9..3.0);
        let x = rng.gen_range(-0.99..0.99);
        let rec = jacobi_eval(n as i64, a, b, x).unwrap();
        let (rod, mag) = rodrigues(n, a, b, x);
        let hyp = falling(n as f64 + a, n) / factorial(n)
            * gauss_2f1(-(n as f64), n as f64 + a + b + 1.0, a + 1.0, 0.5 * (1.0 - x)).unwrap();
        let scale = rec.abs().max(1e-3 * mag);
        let err = (rec - rod).abs().max((rec - hyp).abs()) / scale;
        if err > 1e-10 {
            return Err(format!("n={n} a={a} b={b} x={x}: recurrence {rec}, Rodrigues {rod}, 2F1 {hyp}"));
        }
        worst = worst.max(err);
    }
    Ok(format!("{cases} cases, worst relative {worst:.1e}"))
}

/// `P_l^m(x)` with the Condon–Shortley phase, by the standard recurrences.
pub fn assoc_legendre(l: i64, m: i64, x: f64) -> f64 {
    let ma = m.abs();
    let mut pmm = 1.0;
    let s = (1.0 - x * x).sqrt();
    for k in 0..ma {
        pmm *= -((2 * k + 1) as f64) * s;
    }
    let p = if l == ma {
        pmm
    } else {
        let mut p0 = pmm;
        let mut p1 = x * (2 * ma + 1) as f64 * pmm;
        for ll in (ma + 2)..=l {
            let p2 = ((2 * ll - 1) as f64 * x * p1 - (ll + ma - 1) as f64 * p0) / (ll - ma) as f64;
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    if m >= 0 {
        p
    } else {
        (-1f64).powi(ma as i32) * factorial((l - ma) as u64) / factorial((l + ma) as u64) * p
    }
}

pub fn ylm(l: i64, m: i64, theta: f64, phi: f64) -> Complex64 {
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial((l - m) as u64) / factorial((l + m) as u64)).sqrt();
    Complex64::from_polar(1.0, m as f64 * phi) * norm * assoc_legendre(l, m, theta.cos())
}

/// `q = 0` harmonics against `Y_lm` for `l <= 3`, relative 1e-10.
pub fn legendre_agreement() -> Check {
    let mut count = 0;
    for l in 0..=3i64 {
        for m in -l..=l {
            let y = HarmonicSection::new(0, 2 * l as u64, 2 * m, Chart::Plus).unwrap();
            for k in 0..24 {
                let theta = 0.05 + k as f64 * (PI - 0.1) / 23.0;
                let phi = 0.37 * k as f64;
                let got = y.eval(theta, phi).unwrap();
                let want = ylm(l, m, theta, phi);
                if (got - want).norm() > 1e-10 * want.norm().max(1e-3) {
                    return Err(format!("l={l} m={m} theta={theta}: {got} vs {want}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} points"))
}

/// Every section with `2|q| <= 4` and `l <= |q| + 3`.
pub fn all_sections(two_q: i64, chart: Chart) -> Vec<HarmonicSection> {
    let mut out = Vec::new();
    let start = two_q.unsigned_abs();
    for two_l in (start..=start + 6).step_by(2) {
        for two_m in (-(two_l as i64)..=two_l as i64).step_by(2) {
            out.push(HarmonicSection::new(two_q, two_l, two_m, chart).unwrap());
        }
    }
    out
}

/// Gram matrix of all sections against the identity, deviation below 1e-8.
pub fn orthonormality() -> Check {
    let quad = SphereQuadrature::default();
    let mut worst = 0.0f64;
    for two_q in -4..=4 {
        for chart in [Chart::Plus, Chart::Minus] {
            let set = all_sections(two_q, chart);
            for (i, a) in set.iter().enumerate() {
                for (j, b) in set.iter().enumerate() {
                    let v = quad.inner(a, b).unwrap();
                    let dev = (v - if i == j { 1.0 } else { 0.0 }).norm();
                    if dev >= 1e-8 {
                        return Err(format!("2q={two_q} {chart:?} pair {i},{j}: {v}"));
                    }
                    worst = worst.max(dev);
                }
            }
        }
    }
    Ok(format!("worst deviation {worst:.1e}"))
}

/// `Y+ = exp(2 i q phi) Y-` at random interior points, to 1e-12.
pub fn chart_overlap(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for two_q in -4..=4 {
        for y in all_sections(two_q, Chart::Plus) {
            let minus = y.in_chart(Chart::Minus);
            for _ in 0..10 {
                let theta = rng.gen_range(0.05..PI - 0.05);
                let phi = rng.gen_range(0.0..2.0 * PI);
                let p = y.eval(theta, phi).unwrap();
                let m = minus.eval(theta, phi).unwrap();
                let err = (p - Complex64::from_polar(1.0, two_q as f64 * phi) * m).norm() / p.norm().max(1.0);
                if err >= 1e-12 {
                    return Err(format!("2q={two_q} theta={theta} phi={phi}: {p} vs {m}"));
                }
                worst = worst.max(err);
            }
        }
    }
    Ok(format!("worst {worst:.1e}"))
}

/// Residual of the radial equation, built from the closed form alone: `Q'`
/// is analytic and `Q''` is a fourth-order central difference of `Q'`.
/// Relative to the largest term at each point.
pub fn radial_residual(prof: &RadialProfile, p: &DimensionlessParams, chi: f64) -> f64 {
    let h = (chi / 50.0).min(0.02 / (1.0 + prof.lambda + prof.eps));
    let d = |c: f64| prof.eval_with_derivative(c).unwrap().1;
    let (q, dq) = prof.eval_with_derivative(chi).unwrap();
    let d2q = (d(chi - 2.0 * h) - 8.0 * d(chi - h) + 8.0 * d(chi + h) - d(chi + 2.0 * h)) / (12.0 * h);
    let coth = 1.0 / chi.tanh();
    let sinh = chi.sinh();
    let l = 0.5 * prof.two_l as f64;
    let big_l = l * (l + 1.0) - 0.25 * (prof.two_q * prof.two_q) as f64;
    let w = prof.eps + p.z_alpha * (coth - 1.0);
    let terms = [d2q, 2.0 * coth * dq, (w * w - p.mu * p.mu) * q, -big_l / (sinh * sinh) * q];
    let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    terms.iter().sum::<f64>().abs() / scale
}

/// `int dchi f(chi, Q, Q')` by Gauss–Legendre on panels in `ln chi`. Below
/// `chi0` the power law `Q ~ chi^(kappa - 1/2)` is integrated exactly,
/// given `f ~ chi^(2 kappa - 1 + shift)` there. Returns `None` when `Q`
/// would underflow before the integrand has decayed.
pub fn chi_integral<F>(prof: &RadialProfile, shift: f64, f: F) -> Option<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let chi0 = 1e-7;
    let chi_max = 25.0 / prof.lambda + 20.0;
    if chi_max * (1.0 + prof.lambda) > 600.0 || chi_max > 340.0 {
        return None;
    }
    let rule = GaussLegendre::new(20);
    let g = |c: f64| {
        let (q, dq) = prof.eval_with_derivative(c).unwrap();
        f(c, q, dq)
    };
    let power = 2.0 * prof.kappa + shift;
    let mut total = g(chi0) * chi0 / power;
    let (mut s, s_end) = (chi0.ln(), chi_max.ln());
    while s < s_end {
        let next = (s + 0.125).min(s_end);
        total += rule.integrate(s, next, |u| {
            let c = u.exp();
            g(c) * c
        });
        s = next;
    }
    Some(total)
}

/// Everything the wavefunction acceptance needs for one level.
pub fn wavefunction_level(p: &DimensionlessParams, lvl: &Level) -> Result<bool, String> {
    let tag = format!("mu={} za={} 2q={} {:?}", p.mu, p.z_alpha, p.two_q, lvl.qn);
    let prof = RadialProfile::from_level(lvl, p).map_err(|e| format!("{tag}: {e}"))?;

    for k in 0..120 {
        let chi = 0.05 + k as f64 * (15.0 - 0.05) / 119.0;
        let r = radial_residual(&prof, p, chi);
        if !(r < 1e-6) {
            return Err(format!("{tag}: residual {r:e} at chi={chi}"));
        }
    }

    let nodes = prof.node_count().map_err(|e| format!("{tag}: {e}"))?;
    if nodes as u64 != lvl.qn.n {
        return Err(format!("{tag}: {nodes} nodes"));
    }

    let sob = sobolev_norm(&prof).map_err(|e| format!("{tag}: {e}"))?;
    if !(sob.is_finite() && sob > 0.0) {
        return Err(format!("{tag}: Sobolev integral {sob}"));
    }
    let independent = chi_integral(&prof, 0.0, |c, q, dq| {
        let s = c.sinh();
        q * q * (s * s + 1.0) + dq * dq * s * s
    });
    if let Some(v) = independent {
        if (v / sob - 1.0).abs() > 1e-8 {
            return Err(format!("{tag}: Sobolev {sob} vs chi-space {v}"));
        }
    }

    let charge = charge_functional(&prof, lvl.eps, p).map_err(|e| format!("{tag}: {e}"))?;
    if (charge - 1.0).abs() > 1e-9 {
        return Err(format!("{tag}: charge {charge}"));
    }
    let independent = chi_integral(&prof, 1.0, |c, q, _| {
        let s = c.sinh();
        2.0 * s * s * q * q * (lvl.eps + p.z_alpha * (1.0 / c.tanh() - 1.0))
    });
    if let Some(v) = independent {
        if (v - 1.0).abs() > 1e-8 {
            return Err(format!("{tag}: chi-space charge {v}"));
        }
    }
    let energy = energy_functional(&prof, lvl.eps, p).map_err(|e| format!("{tag}: {e}"))?;
    if (energy / lvl.eps - 1.0).abs() > 1e-8 {
        return Err(format!("{tag}: energy {energy} vs eps {}", lvl.eps));
    }
    Ok(independent.is_some())
}
