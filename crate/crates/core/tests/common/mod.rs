#![allow(dead_code)]

//! Reference integrator for tests: composite Gauss-Legendre with nodes
//! computed from the three-term recurrence, independent of the crate's
//! adaptive Gauss-Kronrod code.

use std::f64::consts::PI;

pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
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
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    /// Integral over `[a, b]` split into `panels` equal pieces.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                sum += w * f(mid + 0.5 * h * x);
            }
        }
        sum * 0.5 * h
    }

    /// Integral over `[a, b]` with panels spaced geometrically away from `a`,
    /// for integrands whose features sit near the left end.
    pub fn integrate_graded(&self, f: impl Fn(f64) -> f64, a: f64, b: f64, first: f64, panels_per_piece: usize) -> f64 {
        let mut edges = vec![a];
        let mut x = a + first;
        while x < b {
            edges.push(x);
            x = a + (x - a) * 2.0;
        }
        edges.push(b);
        edges.windows(2).map(|w| self.integrate(&f, w[0], w[1], panels_per_piece)).sum()
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
