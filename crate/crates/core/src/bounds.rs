//! Closed-form capacity bounds, their gaps and asymptotic gaps.
//!
//! Lower bounds hold at every intensity. Upper bounds drop a vanishing
//! residual and are only trustworthy at high intensity; every report carries
//! an `asymptotic` flag and the validity note [`UPPER_BOUND_VALIDITY`].

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{domain, Result};
use crate::input::{
    ln_big_g, ln_g_factor, AvgOnlyInputDist, Branch, ChannelParams, InputDistribution, PeakAvgConstraints,
    PeakAvgInputDist, Tilted,
};
use crate::numerics::q_unchecked;

/// Intensity range in which the upper bounds are meant to be read.
pub const UPPER_BOUND_VALIDITY: &str = "upper bound is asymptotic; intended for intensities of 30 dB and above";

/// Slack constants of the upper bounds: `beta` in `[0, 1/2)`, `delta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperBoundParams {
    pub beta: f64,
    pub delta: f64,
}

impl Default for UpperBoundParams {
    fn default() -> Self {
        Self { beta: 1e-3, delta: 1e-3 }
    }
}

impl UpperBoundParams {
    pub fn new(beta: f64, delta: f64) -> Result<Self> {
        let p = Self { beta, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.beta) {
            return Err(domain(format!("beta must lie in [0, 0.5), got {}", self.beta)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(domain(format!("delta must be nonnegative, got {}", self.delta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scenario {
    PeakAvg,
    AvgOnly,
}

/// Both bounds for one operating point, in nats per channel use.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub scenario: Scenario,
    pub c_low: f64,
    pub c_upp: f64,
    /// `c_upp - c_low`.
    pub gap: f64,
    /// The gap from its own closed form; agrees with `gap` up to rounding.
    pub gap_closed_form: f64,
    pub asymptotic_gap: f64,
    /// The upper bound omits a residual that only vanishes at high intensity.
    pub asymptotic: bool,
    pub validity: &'static str,
    pub aux: BTreeMap<String, f64>,
}

/// `1/2 ln(2 pi e sigma2)`, the entropy of the unit-gain Gaussian noise.
fn half_ln_2pie(sigma2: f64) -> f64 {
    0.5 * (2.0 * PI * E * sigma2).ln()
}

/// Entropy-power correction
/// `1/2 ln(1 + 2c / y) - (y + c) / c + sqrt(y (y + 2c)) / c` with `c = varsigma2 sigma2`,
/// evaluated without the cancellation of the last two terms.
///
/// Zero in the signal-independent limit `varsigma2 = 0`.
pub fn f_low(xi_p: f64, params: &ChannelParams) -> Result<f64> {
    params.validate()?;
    if !(xi_p > 0.0 && xi_p.is_finite()) {
        return Err(domain(format!("mean intensity must be positive, got {xi_p}")));
    }
    let c = params.varsigma2 * params.sigma2;
    let y = xi_p;
    let r = 2.0 * c / y;
    Ok(0.5 * r.ln_1p() - c / (y * (1.0 + r).sqrt() + y + c))
}

/// `ln((sqrt(1 + varsigma2 L) - 1) * 2 / varsigma2)`, or `ln L` when `varsigma2 = 0`.
fn ln_flat_normalizer(varsigma2: f64, len: f64) -> f64 {
    if varsigma2 == 0.0 {
        return len.ln();
    }
    let u = varsigma2 * len;
    (2.0 * u / ((1.0 + u).sqrt() + 1.0) / varsigma2).ln()
}

/// Lower bound with the peak and average constraints; valid at all intensities.
pub fn c_low_peak_avg(dist: &PeakAvgInputDist) -> Result<f64> {
    let xi_p = dist.constraints.average();
    Ok(dist.ln_normalizer - dist.b * xi_p - half_ln_2pie(dist.params.sigma2) + f_low(xi_p, &dist.params)?)
}

/// `psi(b, varsigma2, A, sigma2, xi, P)`, the expectation correction of the
/// upper bound. Undefined at `b = 0`.
pub fn psi(b: f64, params: &ChannelParams, cons: &PeakAvgConstraints, delta: f64) -> Result<f64> {
    params.validate()?;
    cons.validate()?;
    if b == 0.0 || !b.is_finite() {
        return Err(domain(format!("psi is defined only for nonzero finite b, got {b}")));
    }
    let (a, s2, vs2) = (cons.peak, params.sigma2, params.varsigma2);
    let xi_p = cons.average();
    let spread = (1.0 + a * vs2) * s2;
    let lead = spread.sqrt() / (2.0 * PI).sqrt();
    if b < 0.0 {
        Ok(-b * lead * (-a * a / (2.0 * spread)).exp() - b * xi_p)
    } else {
        let ad = a * delta;
        let w = ((1.0 + xi_p * vs2) * s2).sqrt();
        let mass = q_unchecked(-xi_p / w) - q_unchecked((a + ad - xi_p) / w);
        Ok(b * lead * (-ad * ad / (2.0 * spread)).exp() - b * xi_p * mass)
    }
}

/// Asymptotic upper bound with the peak and average constraints.
pub fn c_upp_peak_avg(dist: &PeakAvgInputDist, ub: &UpperBoundParams) -> Result<f64> {
    ub.validate()?;
    let p = &dist.params;
    let a_ext = dist.constraints.peak * (1.0 + ub.delta);
    let tail = (-2.0 * ub.beta).ln_1p() + half_ln_2pie(p.sigma2);
    match dist.branch {
        Branch::ZeroB => Ok(ln_flat_normalizer(p.varsigma2, a_ext) - tail),
        Branch::NonzeroB => {
            let ln_z_ext = ln_extended_normalizer(dist, ub.delta)?;
            Ok(ln_z_ext - tail + psi(dist.b, p, &dist.constraints, ub.delta)?)
        }
    }
}

/// `ln(2 G / varsigma2)`; the plain exponential integral on `[0, A(1 + delta)]` when `varsigma2 = 0`.
fn ln_extended_normalizer(dist: &PeakAvgInputDist, delta: f64) -> Result<f64> {
    let p = &dist.params;
    let a = dist.constraints.peak;
    if p.varsigma2 == 0.0 {
        return Tilted { varsigma2: 0.0, end: a * (1.0 + delta) }.ln_z(dist.b);
    }
    Ok((2.0 / p.varsigma2).ln() + ln_big_g(dist.b, p.varsigma2, a, delta)?)
}

/// `c_upp - c_low`.
pub fn gap_peak_avg(dist: &PeakAvgInputDist, ub: &UpperBoundParams) -> Result<f64> {
    Ok(c_upp_peak_avg(dist, ub)? - c_low_peak_avg(dist)?)
}

/// The gap assembled directly as a ratio of normalizers plus corrections,
/// without forming either bound.
pub fn gap_peak_avg_closed_form(dist: &PeakAvgInputDist, ub: &UpperBoundParams) -> Result<f64> {
    ub.validate()?;
    let p = &dist.params;
    let a = dist.constraints.peak;
    let xi_p = dist.constraints.average();
    let slack = -(-2.0 * ub.beta).ln_1p();
    let fl = f_low(xi_p, p)?;
    match dist.branch {
        Branch::ZeroB => {
            Ok(ln_flat_normalizer(p.varsigma2, a * (1.0 + ub.delta)) - ln_flat_normalizer(p.varsigma2, a) + slack - fl)
        }
        Branch::NonzeroB => {
            let ratio = if p.varsigma2 == 0.0 {
                ln_extended_normalizer(dist, ub.delta)? - dist.ln_normalizer
            } else {
                ln_big_g(dist.b, p.varsigma2, a, ub.delta)? - ln_g_factor(dist.b, p.varsigma2, a)?
            };
            Ok(ratio + slack + psi(dist.b, p, &dist.constraints, ub.delta)? + dist.b * xi_p - fl)
        }
    }
}

/// High-intensity limit of the peak-and-average gap.
pub fn asymptotic_gap_peak_avg(branch: Branch, ub: &UpperBoundParams) -> f64 {
    let slack = -(-2.0 * ub.beta).ln_1p();
    match branch {
        Branch::ZeroB => 0.5 * ub.delta.ln_1p() + slack,
        Branch::NonzeroB => slack,
    }
}

/// Lower bound with the average constraint only; valid at all intensities.
pub fn c_low_avg_only(dist: &AvgOnlyInputDist) -> Result<f64> {
    let xi_p = dist.constraints.average();
    Ok(-half_ln_2pie(dist.params.sigma2) + 1.0 + dist.m + dist.n * xi_p + f_low(xi_p, &dist.params)?)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&beta) {
        return Err(domain(format!("beta must lie in [0, 1), got {beta}")));
    }
    Ok(())
}

/// Asymptotic upper bound with the average constraint only.
pub fn c_upp_avg_only(dist: &AvgOnlyInputDist, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let xi_p = dist.constraints.average();
    Ok(c_low_avg_only(dist)? - f_low(xi_p, &dist.params)? - (-beta).ln_1p())
}

/// `c_upp - c_low` for the average-only bounds.
pub fn gap_avg_only(dist: &AvgOnlyInputDist, beta: f64) -> Result<f64> {
    Ok(c_upp_avg_only(dist, beta)? - c_low_avg_only(dist)?)
}

/// `ln(1 / (1 - beta)) - f_low(xi P)`.
pub fn gap_avg_only_closed_form(dist: &AvgOnlyInputDist, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(-(-beta).ln_1p() - f_low(dist.constraints.average(), &dist.params)?)
}

pub fn asymptotic_gap_avg_only(beta: f64) -> f64 {
    -(-beta).ln_1p()
}

/// AWGN capacity `1/2 ln(1 + snr)`.
pub fn shannon_awgn(snr: f64) -> Result<f64> {
    if !(snr >= 0.0) {
        return Err(domain(format!("snr must be nonnegative, got {snr}")));
    }
    Ok(0.5 * snr.ln_1p())
}

/// Evaluates both peak-and-average bounds and their gaps.
pub fn report_peak_avg(dist: &PeakAvgInputDist, ub: &UpperBoundParams) -> Result<BoundReport> {
    let c_low = c_low_peak_avg(dist)?;
    let c_upp = c_upp_peak_avg(dist, ub)?;
    let p = &dist.params;
    let a = dist.constraints.peak;
    let mut aux = BTreeMap::new();
    aux.insert("f_low".into(), f_low(dist.constraints.average(), p)?);
    aux.insert("b".into(), dist.b);
    aux.insert("ln_normalizer".into(), dist.ln_normalizer);
    if p.varsigma2 > 0.0 {
        aux.insert("alpha_star".into(), crate::input::alpha_star(p.varsigma2, a)?);
        aux.insert("ln_g".into(), ln_g_factor(dist.b, p.varsigma2, a)?);
        aux.insert("ln_G".into(), ln_big_g(dist.b, p.varsigma2, a, ub.delta)?);
    }
    if dist.branch == Branch::NonzeroB {
        aux.insert("psi".into(), psi(dist.b, p, &dist.constraints, ub.delta)?);
    }
    Ok(BoundReport {
        scenario: Scenario::PeakAvg,
        c_low,
        c_upp,
        gap: c_upp - c_low,
        gap_closed_form: gap_peak_avg_closed_form(dist, ub)?,
        asymptotic_gap: asymptotic_gap_peak_avg(dist.branch, ub),
        asymptotic: true,
        validity: UPPER_BOUND_VALIDITY,
        aux,
    })
}

/// Evaluates both average-only bounds and their gaps.
pub fn report_avg_only(dist: &AvgOnlyInputDist, beta: f64) -> Result<BoundReport> {
    let c_low = c_low_avg_only(dist)?;
    let c_upp = c_upp_avg_only(dist, beta)?;
    let mut aux = BTreeMap::new();
    aux.insert("f_low".into(), f_low(dist.constraints.average(), &dist.params)?);
    aux.insert("m".into(), dist.m);
    aux.insert("n".into(), dist.n);
    aux.insert("effective_end".into(), dist.effective_end());
    Ok(BoundReport {
        scenario: Scenario::AvgOnly,
        c_low,
        c_upp,
        gap: c_upp - c_low,
        gap_closed_form: gap_avg_only_closed_form(dist, beta)?,
        asymptotic_gap: asymptotic_gap_avg_only(beta),
        asymptotic: true,
        validity: UPPER_BOUND_VALIDITY,
        aux,
    })
}
