//! Gauss–Legendre rules and a composite integrator on graded panels.

use std::f64::consts::PI;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are found by Newton iteration on the Legendre recurrence,
    /// starting from the Tricomi estimate.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel breakpoints on `[lo, hi]`: uniform width `core_width` inside
/// `[core_lo, core_hi]`, widths growing geometrically by `growth` outside.
pub fn graded_breakpoints(
    lo: f64,
    hi: f64,
    core_lo: f64,
    core_hi: f64,
    core_width: f64,
    growth: f64,
) -> Vec<f64> {
    let core_lo = core_lo.clamp(lo, hi);
    let core_hi = core_hi.clamp(core_lo, hi);
    let mut left = vec![core_lo];
    let mut w = core_width;
    let mut s = core_lo;
    while s > lo {
        s = (s - w).max(lo);
        left.push(s);
        w *= growth;
    }
    left.reverse();
    let count = ((core_hi - core_lo) / core_width).ceil().max(1.0) as usize;
    let step = (core_hi - core_lo) / count as f64;
    let mut points = left;
    for k in 1..=count {
        points.push(if k == count { core_hi } else { core_lo + k as f64 * step });
    }
    let mut w = core_width;
    let mut s = core_hi;
    while s < hi {
        s = (s + w).min(hi);
        points.push(s);
        w *= growth;
    }
    points.dedup();
    points
}

/// Splits every panel in two.
pub fn refine_breakpoints(points: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * points.len());
    for pair in points.windows(2) {
        out.push(pair[0]);
        out.push(0.5 * (pair[0] + pair[1]));
    }
    if let Some(&last) = points.last() {
        out.push(last);
    }
    out
}
