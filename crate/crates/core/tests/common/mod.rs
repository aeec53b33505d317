//! Numerical references for the integration tests, written independently of
//! the library's quadrature and special functions.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

pub struct Composite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Composite {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Composite { nodes, weights }
    }

    pub fn panel(&self, a: f64, b: f64, f: &mut impl FnMut(f64) -> f64) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
    }

    /// Sum over `panels` equal panels of `[a, b]`.
    pub fn uniform(&self, a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| self.panel(a + k as f64 * h, a + (k + 1) as f64 * h, &mut f))
            .sum()
    }

    /// Panels `[0, 2^-depth], ..., [1/4, 1/2], [1/2, 1]` scaled to `[0, len]`,
    /// for integrands with an endpoint singularity at 0.
    pub fn graded(&self, len: f64, depth: u32, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut total = self.panel(0.0, len * 0.5f64.powi(depth as i32), &mut f);
        for k in (0..depth).rev() {
            let lo = len * 0.5f64.powi(k as i32 + 1);
            let hi = len * 0.5f64.powi(k as i32);
            total += self.panel(lo, hi, &mut f);
        }
        total
    }
}

/// `K1(x) = int_0^inf e^{-x cosh t} cosh t dt` by the trapezoid rule, which
/// converges geometrically for this even, analytic, fast-decaying integrand.
pub fn k1_trapezoid(x: f64) -> f64 {
    let h = 1.0 / 64.0;
    let mut sum = 0.5 * (-x).exp();
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let term = (-x * t.cosh()).exp() * t.cosh();
        sum += term;
        if term < 1e-300 || (term < sum * 1e-18 && x * t.cosh() > 50.0) {
            break;
        }
        k += 1;
    }
    h * sum
}

/// `E1(x) = int_0^inf exp(-x e^v) dv` by composite Gauss-Legendre.
pub fn e1_gauss_legendre(x: f64) -> f64 {
    let upper = (60.0 / x).ln().max(1.0);
    let panels = (upper / 0.125).ceil() as usize;
    Composite::new(10).uniform(0.0, upper, panels, |v| (-x * v.exp()).exp())
}

/// `n` points log-spaced on `[lo, hi]`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
