//! Capacity-approaching input densities.
//!
//! Two scenarios are covered:
//!
//! * peak and average constraints (`0 <= X <= A`, `E[X] = xi P`): the
//!   density is `e^{b x} / sqrt(1 + varsigma2 x)` on `[0, A]`, normalized,
//!   with the tilt `b` fixed by the mean constraint;
//! * average constraint only (`X >= 0`, `E[X] = xi P`): the density is
//!   `e^{-m - 1 - n x} / sqrt(1 + varsigma2 x)` with `n > 0`.
//!
//! Both minimize `J[f] = int f ln f + 1/2 int ln(1 + varsigma2 x) f`
//! under the normalization and mean constraints.

mod avg_only;
mod functional;
mod peak_avg;
mod sampling;

use serde::Serialize;

use crate::error::{domain, Result};

pub use avg_only::{solve_mn, AvgOnlyInputDist};
pub use functional::{j_functional, j_functional_with, FEASIBILITY_TOL};
pub use peak_avg::{
    alpha_star, big_g, g_factor, ln_big_g, ln_g_factor, solve_b, tilted_mean, Branch, PeakAvgInputDist, ZERO_B_CASE_TOL,
};
pub use sampling::{sample, InverseCdfTable, TABLE_NODES};

pub(crate) use peak_avg::Tilted;

/// Noise description of the channel `Y = X + sqrt(X) Z1 + Z0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    /// Variance of the signal-independent term `Z0`.
    pub sigma2: f64,
    /// Ratio of the signal-dependent to the signal-independent variance coefficient.
    /// Zero is admitted as the signal-independent limit.
    pub varsigma2: f64,
}

impl ChannelParams {
    pub fn new(sigma2: f64, varsigma2: f64) -> Result<Self> {
        let p = Self { sigma2, varsigma2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(domain(format!("sigma2 must be positive and finite, got {}", self.sigma2)));
        }
        if !(self.varsigma2 >= 0.0 && self.varsigma2.is_finite()) {
            return Err(domain(format!("varsigma2 must be nonnegative and finite, got {}", self.varsigma2)));
        }
        Ok(())
    }

    /// Conditional variance of `Y` given `X = x`.
    pub fn conditional_variance(&self, x: f64) -> f64 {
        (1.0 + self.varsigma2 * x) * self.sigma2
    }
}

/// Peak intensity `A`, dimming target `xi` and nominal intensity `P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakAvgConstraints {
    pub peak: f64,
    pub xi: f64,
    pub nominal: f64,
}

impl PeakAvgConstraints {
    pub fn new(peak: f64, xi: f64, nominal: f64) -> Result<Self> {
        let c = Self { peak, xi, nominal };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.peak > 0.0 && self.peak.is_finite()) {
            return Err(domain(format!("peak intensity must be positive, got {}", self.peak)));
        }
        if !(self.xi > 0.0 && self.xi <= 1.0) {
            return Err(domain(format!("dimming target must lie in (0, 1], got {}", self.xi)));
        }
        if !(self.nominal > 0.0 && self.nominal.is_finite()) {
            return Err(domain(format!("nominal intensity must be positive, got {}", self.nominal)));
        }
        if self.average() > self.peak {
            return Err(domain(format!("average intensity {} exceeds the peak {}", self.average(), self.peak)));
        }
        Ok(())
    }

    /// Required mean intensity `xi * P`.
    pub fn average(&self) -> f64 {
        self.xi * self.nominal
    }

    /// Average-to-peak ratio `xi P / A`.
    pub fn apr(&self) -> f64 {
        self.average() / self.peak
    }
}

/// Dimming target `xi` and nominal intensity `P`; no peak limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvgOnlyConstraints {
    pub xi: f64,
    pub nominal: f64,
}

impl AvgOnlyConstraints {
    pub fn new(xi: f64, nominal: f64) -> Result<Self> {
        let c = Self { xi, nominal };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0 && self.xi <= 1.0) {
            return Err(domain(format!("dimming target must lie in (0, 1], got {}", self.xi)));
        }
        if !(self.nominal > 0.0 && self.nominal.is_finite()) {
            return Err(domain(format!("nominal intensity must be positive, got {}", self.nominal)));
        }
        Ok(())
    }

    pub fn average(&self) -> f64 {
        self.xi * self.nominal
    }
}

/// Common surface of the solved input densities.
pub trait InputDistribution: Send + Sync {
    fn params(&self) -> ChannelParams;

    /// Mean intensity the density was solved for.
    fn average(&self) -> f64;

    fn pdf(&self, x: f64) -> f64;

    fn cdf(&self, x: f64) -> f64;

    /// Upper end of the support; infinite without a peak constraint.
    fn support_end(&self) -> f64;

    /// Point beyond which less than `1e-12` of the mass lies.
    fn effective_end(&self) -> f64;

    /// `E[h(X)]` by quadrature against the density.
    fn expectation(&self, h: &dyn Fn(f64) -> f64) -> Result<f64>;

    /// Differential entropy `-int f ln f` in nats.
    fn input_entropy(&self) -> Result<f64>;

    /// `E[ln(1 + varsigma2 X)]`.
    fn mean_log_variance_factor(&self) -> Result<f64> {
        let vs2 = self.params().varsigma2;
        if vs2 == 0.0 {
            return Ok(0.0);
        }
        self.expectation(&|x| (vs2 * x).ln_1p())
    }
}

/// Break points on `[0, end]` spaced by decades of `1 / varsigma2`, where the
/// `1 / sqrt(1 + varsigma2 x)` factor changes character.
pub(crate) fn decade_breaks(varsigma2: f64, end: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    if varsigma2 > 0.0 {
        let mut x = 1.0 / varsigma2;
        while x < end {
            pts.push(x);
            x *= 10.0;
        }
    }
    pts.push(end);
    pts
}
