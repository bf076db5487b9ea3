use std::f64::consts::PI;

use serde::Serialize;

use super::{AvgOnlyConstraints, ChannelParams, InputDistribution};
use crate::error::{domain, Error, Result};
use crate::numerics::{erfcx, find_root, gauss_q, sqrt_pi_x_erfcx_excess, Quadrature, RootFinder};

/// Survival probability that defines [`InputDistribution::effective_end`].
const TAIL_MASS: f64 = 1e-12;

const INNER_REL_TOL: f64 = 1e-13;

/// Solved average-only input density `e^{-m - 1 - n x} / sqrt(1 + varsigma2 x)` on `[0, inf)`.
#[derive(Debug, Clone, Serialize)]
pub struct AvgOnlyInputDist {
    pub m: f64,
    pub n: f64,
    pub params: ChannelParams,
    pub constraints: AvgOnlyConstraints,
    /// `s = sqrt(n / varsigma2)`; infinite in the signal-independent limit.
    s: f64,
    end: f64,
}

/// Mean of `1 + varsigma2 X` minus one, as a function of `s = sqrt(n / varsigma2)`.
fn scaled_mean(s: f64) -> f64 {
    sqrt_pi_x_erfcx_excess(s) + 0.5 / (s * s)
}

/// Solves the normalization and mean conditions for `(m, n)`.
///
/// `tol` bounds the relative residual of the mean condition.
pub fn solve_mn(params: ChannelParams, cons: AvgOnlyConstraints, tol: f64) -> Result<AvgOnlyInputDist> {
    params.validate()?;
    cons.validate()?;
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let vs2 = params.varsigma2;
    let xi_p = cons.average();
    if vs2 == 0.0 {
        // exponential density with mean xi P
        let n = 1.0 / xi_p;
        let mut d = AvgOnlyInputDist { m: -1.0 - n.ln(), n, params, constraints: cons, s: f64::INFINITY, end: 0.0 };
        d.end = -TAIL_MASS.ln() / n;
        return Ok(d);
    }
    let target = (vs2 * xi_p).ln();
    if !target.is_finite() {
        return Err(Error::Solver(format!("varsigma2 * xi * P = {} is out of range", vs2 * xi_p)));
    }
    let h = |u: f64| scaled_mean(u.exp()).ln() - target;
    // the mean behaves like 1 / s^2 at both ends, so start near that
    let u0 = -0.5 * target;
    let (mut lo, mut hi) = (u0 - 1.0, u0 + 1.0);
    let mut tries = 0;
    while h(lo) < 0.0 || h(hi) > 0.0 {
        lo -= 2.0;
        hi += 2.0;
        tries += 1;
        if tries > 40 {
            return Err(Error::Bracket { lo, hi, f_lo: h(lo), f_hi: h(hi) });
        }
    }
    // h is the log of the relative residual; a relative error tol maps onto ln(1 + tol)
    let root = RootFinder::new().tol(tol.ln_1p()).solve(h, lo, hi)?;
    let s = root.root.exp();
    let n = vs2 * s * s;
    let ln_e = (vs2 * s).ln() - 0.5 * PI.ln() - erfcx(s).ln();
    let mut d = AvgOnlyInputDist { m: -1.0 - ln_e, n, params, constraints: cons, s, end: 0.0 };
    d.end = d.find_end()?;
    Ok(d)
}

impl AvgOnlyInputDist {
    /// `s = sqrt(n / varsigma2)`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// `ln P(X > x)`.
    pub fn ln_survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if self.params.varsigma2 == 0.0 {
            return -self.n * x;
        }
        let tau = (1.0 + self.params.varsigma2 * x).sqrt();
        -self.n * x + erfcx(self.s * tau).ln() - erfcx(self.s).ln()
    }

    fn find_end(&self) -> Result<f64> {
        let target = TAIL_MASS.ln();
        let mut hi = 1.0 / self.n;
        while self.ln_survival(hi) > target {
            hi *= 2.0;
        }
        Ok(find_root(|x| self.ln_survival(x) - target, 0.0, hi, 1e-10)?.root)
    }

    /// Residuals of the two defining conditions: the normalization
    /// `e^{-m-1} sqrt(pi) / (varsigma2 s) erfc(s) e^{s^2} - 1`, evaluated
    /// through the Q-function with `erfc(s) = 2 Q(sqrt(2) s)`, and the
    /// relative residual of the mean condition.
    pub fn equation_residuals(&self) -> Result<(f64, f64)> {
        let vs2 = self.params.varsigma2;
        let xi_p = self.constraints.average();
        if vs2 == 0.0 {
            let norm = (-self.m - 1.0).exp() / self.n - 1.0;
            return Ok((norm, self.n * xi_p - 1.0));
        }
        let s = self.s;
        let q = gauss_q(std::f64::consts::SQRT_2 * s)?;
        let norm = if s < 5.0 {
            (-self.m - 1.0).exp() * PI.sqrt() / (vs2 * s) * 2.0 * q * (s * s).exp() - 1.0
        } else {
            // the literal product underflows/overflows; use the scaled form
            (-self.m - 1.0).exp() * PI.sqrt() / (vs2 * s) * erfcx(s) - 1.0
        };
        let mean = scaled_mean(s) / vs2;
        Ok((norm, mean / xi_p - 1.0))
    }

    fn t_moment(&self, h: &dyn Fn(f64) -> f64) -> Result<f64> {
        let vs2 = self.params.varsigma2;
        let s2 = self.s * self.s;
        let width = 1.0 / (self.s + 2.0 * s2);
        let r = Quadrature::new().rel_tol(INNER_REL_TOL).scale(width).integrate_with_breaks(
            |t| {
                let u = t * t - 1.0;
                h(u / vs2) * (-s2 * u).exp()
            },
            &[1.0, 1.0 + 10.0 * width, f64::INFINITY],
        )?;
        Ok(r.value)
    }
}

impl InputDistribution for AvgOnlyInputDist {
    fn params(&self) -> ChannelParams {
        self.params
    }

    fn average(&self) -> f64 {
        self.constraints.average()
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        (-self.m - 1.0 - self.n * x).exp() / (1.0 + self.params.varsigma2 * x).sqrt()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        -self.ln_survival(x).exp_m1()
    }

    fn support_end(&self) -> f64 {
        f64::INFINITY
    }

    fn effective_end(&self) -> f64 {
        self.end
    }

    fn expectation(&self, h: &dyn Fn(f64) -> f64) -> Result<f64> {
        if self.params.varsigma2 == 0.0 {
            let n = self.n;
            let r = Quadrature::new()
                .rel_tol(INNER_REL_TOL)
                .scale(1.0 / n)
                .integrate_with_breaks(|x| h(x) * n * (-n * x).exp(), &[0.0, 10.0 / n, f64::INFINITY])?;
            return Ok(r.value);
        }
        let num = self.t_moment(h)?;
        let den = self.t_moment(&|_| 1.0)?;
        Ok(num / den)
    }

    /// `1 + m + n xi P + 1/2 E[ln(1 + varsigma2 X)]`.
    fn input_entropy(&self) -> Result<f64> {
        Ok(1.0 + self.m + self.n * self.average() + 0.5 * self.mean_log_variance_factor()?)
    }
}
