//! The channel `Y = X + sqrt(X) Z1 + Z0` and numerical mutual-information
//! oracles for checking the closed-form bounds.

use std::cell::Cell;
use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bounds::f_low;
use crate::error::{domain, Error, Result};
use crate::input::{sample, ChannelParams, InputDistribution};
use crate::numerics::Quadrature;

/// Half-width of the input window, in conditional standard deviations, used
/// for the marginal density.
const INNER_SIGMAS: f64 = 10.0;

/// Extension of the output window beyond the input support, in conditional
/// standard deviations.
const OUTER_SIGMAS: f64 = 8.0;

const INNER_REL_TOL: f64 = 1e-11;
const OUTER_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutualInfoResult {
    pub h_y: f64,
    pub h_y_given_x: f64,
    pub mi: f64,
    /// Quadrature error estimate of `h_y` plus a bound on the truncated tails.
    pub quadrature_error: f64,
}

/// Monte-Carlo estimate of the mutual information with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloMi {
    pub mi: f64,
    pub std_error: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyCheck {
    /// `H(Y)` by quadrature.
    pub lhs: f64,
    /// `H(X) + f_low(xi P)`.
    pub rhs: f64,
    pub holds: bool,
}

fn check_input(x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(domain(format!("channel input must be nonnegative and finite, got {x}")));
    }
    Ok(())
}

fn gaussian(y: f64, mean: f64, var: f64) -> f64 {
    let d = y - mean;
    (-d * d / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// Density of `Y` given `X = x`: normal with mean `x` and variance `(1 + varsigma2 x) sigma2`.
pub fn conditional_pdf(y: f64, x: f64, params: &ChannelParams) -> Result<f64> {
    check_input(x)?;
    params.validate()?;
    Ok(gaussian(y, x, params.conditional_variance(x)))
}

fn noise_streams(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut z0 = ChaCha8Rng::seed_from_u64(seed);
    let mut z1 = ChaCha8Rng::seed_from_u64(seed);
    z0.set_stream(0);
    z1.set_stream(1);
    (z0, z1)
}

/// `count` channel outputs for the fixed input `x`; reproducible per seed.
///
/// `Z0` and `Z1` come from two independent ChaCha8 streams of the seed.
pub fn transmit(x: f64, params: &ChannelParams, seed: u64, count: usize) -> Result<Vec<f64>> {
    check_input(x)?;
    params.validate()?;
    let (mut r0, mut r1) = noise_streams(seed);
    let s0 = params.sigma2.sqrt();
    let s1 = (params.varsigma2 * params.sigma2).sqrt();
    let sx = x.sqrt();
    Ok((0..count)
        .map(|_| {
            let z0: f64 = r0.sample(StandardNormal);
            let z1: f64 = r1.sample(StandardNormal);
            x + sx * s1 * z1 + s0 * z0
        })
        .collect())
}

/// One channel output per input, reproducible per seed.
pub fn transmit_each(xs: &[f64], params: &ChannelParams, seed: u64) -> Result<Vec<f64>> {
    params.validate()?;
    let (mut r0, mut r1) = noise_streams(seed);
    let s0 = params.sigma2.sqrt();
    let s1 = (params.varsigma2 * params.sigma2).sqrt();
    xs.iter()
        .map(|&x| {
            check_input(x)?;
            let z0: f64 = r0.sample(StandardNormal);
            let z1: f64 = r1.sample(StandardNormal);
            Ok(x + x.sqrt() * s1 * z1 + s0 * z0)
        })
        .collect()
}

/// `H(Y | X) = 1/2 ln(2 pi e sigma2) + 1/2 E[ln(1 + varsigma2 X)]`.
pub fn conditional_entropy(dist: &dyn InputDistribution) -> Result<f64> {
    let p = dist.params();
    Ok(0.5 * (2.0 * PI * E * p.sigma2).ln() + 0.5 * dist.mean_log_variance_factor()?)
}

/// Inputs `x` whose conditional density at `y` is within `k` standard deviations.
fn input_window(y: f64, k: f64, p: &ChannelParams) -> (f64, f64) {
    let k2s = k * k * p.sigma2;
    let w = 0.5
        * (k2s * p.varsigma2
            + (k2s * k2s * p.varsigma2 * p.varsigma2 + 4.0 * k2s * (1.0 + p.varsigma2 * y.max(0.0))).sqrt());
    (y - w, y + w)
}

/// `f_Y(y) = int f_{Y|X}(y|x) f_X(x) dx` by quadrature over the inputs near `y`.
pub fn output_marginal_pdf(y: f64, dist: &dyn InputDistribution) -> Result<f64> {
    let p = dist.params();
    let end = dist.effective_end();
    let (lo, hi) = input_window(y, INNER_SIGMAS, &p);
    let (lo, hi) = (lo.max(0.0), hi.min(end));
    if lo >= hi {
        return Ok(0.0);
    }
    let sd = p.conditional_variance(y.clamp(0.0, end)).sqrt();
    let mut pts = vec![lo];
    for c in [y - 3.0 * sd, y, y + 3.0 * sd] {
        if c > lo && c < hi {
            pts.push(c);
        }
    }
    pts.push(hi);
    let r = Quadrature::new().rel_tol(INNER_REL_TOL).integrate_with_breaks(
        |x| {
            let fx = dist.pdf(x);
            if fx == 0.0 {
                0.0
            } else {
                fx * gaussian(y, x, p.conditional_variance(x))
            }
        },
        &pts,
    )?;
    Ok(r.value)
}

/// Output window and break points for integrals over `y`.
fn output_breaks(dist: &dyn InputDistribution) -> Vec<f64> {
    let p = dist.params();
    let sigma = p.sigma2.sqrt();
    let end = dist.effective_end();
    let top = end + OUTER_SIGMAS * p.conditional_variance(end).sqrt();
    let mut pts = vec![-OUTER_SIGMAS * sigma, -3.0 * sigma, 0.0];
    // geometric spacing keeps panels proportional to the local output spread
    let mut y = sigma;
    while y < top {
        pts.push(y);
        y *= 2.0;
    }
    if end < top && pts.last().is_none_or(|&l| l < end) {
        pts.push(end);
    }
    pts.push(top);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// `H(Y) = -int f_Y ln f_Y` over the truncated output window.
pub fn output_entropy(dist: &dyn InputDistribution) -> Result<(f64, f64)> {
    let failure: Cell<Option<Error>> = Cell::new(None);
    let integrand = |y: f64| match output_marginal_pdf(y, dist) {
        Ok(f) if f > 0.0 => -f * f.ln(),
        Ok(_) => 0.0,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let r = Quadrature::new().rel_tol(OUTER_REL_TOL).integrate_with_breaks(integrand, &output_breaks(dist));
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = r?;
    Ok((r.value, r.est_error + 1e-10))
}

/// `I(X; Y) = H(Y) - H(Y | X)` with `H(Y)` by nested quadrature.
pub fn mutual_information(dist: &dyn InputDistribution) -> Result<MutualInfoResult> {
    let (h_y, err) = output_entropy(dist)?;
    let h_y_given_x = conditional_entropy(dist)?;
    Ok(MutualInfoResult { h_y, h_y_given_x, mi: h_y - h_y_given_x, quadrature_error: err })
}

/// Sample average of `ln f_{Y|X}(Y|X) - ln f_Y(Y)` over `samples` simulated
/// channel uses.
pub fn mutual_information_monte_carlo(dist: &dyn InputDistribution, samples: usize, seed: u64) -> Result<MonteCarloMi> {
    if samples < 2 {
        return Err(domain("Monte-Carlo estimate needs at least two samples"));
    }
    let p = dist.params();
    let xs = sample(dist, samples, seed)?;
    let ys = transmit_each(&xs, &p, seed.wrapping_add(0x9e37_79b9_7f4a_7c15))?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        let fy = output_marginal_pdf(y, dist)?;
        let v = gaussian(y, x, p.conditional_variance(x)).ln() - fy.ln();
        if !v.is_finite() {
            return Err(Error::Solver(format!("output density vanished at y = {y}")));
        }
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MonteCarloMi { mi: mean, std_error: (var / n).sqrt(), samples })
}

/// Compares `H(Y)` with `H(X) + f_low(xi P)`; holds within `1e-4`.
pub fn entropy_inequality_check(dist: &dyn InputDistribution) -> Result<EntropyCheck> {
    let (lhs, _) = output_entropy(dist)?;
    let rhs = dist.input_entropy()? + f_low(dist.average(), &dist.params())?;
    Ok(EntropyCheck { lhs, rhs, holds: lhs >= rhs - 1e-4 })
}
