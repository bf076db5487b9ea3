use serde::Serialize;

use super::DEFAULT_ROOT_TOL;
use crate::error::{domain, Error, Result};

/// A located root together with the function value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Brent's method: bisection safeguarded inverse quadratic / secant steps.
///
/// Terminates when `|f(x)| <= tol` or the bracket has shrunk to a few ulps.
#[derive(Debug, Clone, Copy)]
pub struct RootFinder {
    tol: f64,
    max_iter: usize,
}

impl Default for RootFinder {
    fn default() -> Self {
        Self { tol: DEFAULT_ROOT_TOL, max_iter: 200 }
    }
}

impl RootFinder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn solve<F: FnMut(f64) -> f64>(&self, mut f: F, lo: f64, hi: f64) -> Result<RootResult> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(domain(format!("invalid bracket [{lo}, {hi}]")));
        }
        let (mut a, mut b) = (lo, hi);
        let (mut fa, mut fb) = (f(a), f(b));
        if fa.is_nan() || fb.is_nan() {
            return Err(domain("function is NaN at a bracket end"));
        }
        if fa == 0.0 {
            return Ok(RootResult { root: a, residual: 0.0, iterations: 0 });
        }
        if fb == 0.0 {
            return Ok(RootResult { root: b, residual: 0.0, iterations: 0 });
        }
        if fa.signum() == fb.signum() {
            return Err(Error::Bracket { lo, hi, f_lo: fa, f_hi: fb });
        }

        let (mut c, mut fc) = (b, fb);
        let mut d = b - a;
        let mut e = d;
        for iter in 1..=self.max_iter {
            if fb.signum() == fc.signum() {
                c = a;
                fc = fa;
                d = b - a;
                e = d;
            }
            if fc.abs() < fb.abs() {
                a = b;
                b = c;
                c = a;
                fa = fb;
                fb = fc;
                fc = fa;
            }
            let tol_x = 2.0 * f64::EPSILON * b.abs() + 1e-300;
            let half = 0.5 * (c - b);
            if fb.abs() <= self.tol || half.abs() <= tol_x {
                return Ok(RootResult { root: b, residual: fb, iterations: iter });
            }
            if e.abs() >= tol_x && fa.abs() > fb.abs() {
                let s = fb / fa;
                let (mut p, mut q);
                if a == c {
                    p = 2.0 * half * s;
                    q = 1.0 - s;
                } else {
                    let qq = fa / fc;
                    let r = fb / fc;
                    p = s * (2.0 * half * qq * (qq - r) - (b - a) * (r - 1.0));
                    q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
                }
                if p > 0.0 {
                    q = -q;
                }
                p = p.abs();
                let min1 = 3.0 * half * q - (tol_x * q).abs();
                let min2 = (e * q).abs();
                if 2.0 * p < min1.min(min2) {
                    e = d;
                    d = p / q;
                } else {
                    d = half;
                    e = d;
                }
            } else {
                d = half;
                e = d;
            }
            a = b;
            fa = fb;
            b += if d.abs() > tol_x { d } else { tol_x.copysign(half) };
            fb = f(b);
            if fb.is_nan() {
                return Err(domain(format!("function is NaN at {b}")));
            }
        }
        Err(Error::RootBudget { lo: b.min(c), hi: b.max(c), iterations: self.max_iter })
    }
}

/// Finds a root of `f` in `[lo, hi]` given a sign change, to residual `tol`.
pub fn find_root<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<RootResult> {
    RootFinder::new().tol(tol).solve(f, lo, hi)
}
