use std::cell::Cell;
use std::f64::consts::PI;

use serde::Serialize;

use super::{decade_breaks, ChannelParams, InputDistribution, PeakAvgConstraints};
use crate::error::{domain, Error, Result};
use crate::numerics::{erf, erfcx, find_root, Quadrature};

/// `|alpha - alpha_star|` below which the untilted (`b = 0`) density is used.
pub const ZERO_B_CASE_TOL: f64 = 1e-9;

/// Largest `|b|` the tilt search will consider before giving up.
const MAX_TILT: f64 = 1e6;

/// Below this `|b| A` the mean is taken from a moment quadrature instead of
/// the closed form, whose terms cancel like `1 / b`.
const SMALL_TILT: f64 = 0.05;

const INNER_REL_TOL: f64 = 1e-13;

/// Which case of the optimal density applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    ZeroB,
    NonzeroB,
}

/// Solved peak+average input density
/// `f(x) = e^{b x} / (Z sqrt(1 + varsigma2 x))` on `[0, A]`.
#[derive(Debug, Clone, Serialize)]
pub struct PeakAvgInputDist {
    pub branch: Branch,
    pub b: f64,
    /// `ln Z`, with `Z = 2 g(b, varsigma2, A) / varsigma2` (`int_0^A e^{bx}` when `varsigma2 = 0`).
    pub ln_normalizer: f64,
    pub params: ChannelParams,
    pub constraints: PeakAvgConstraints,
}

/// `sqrt(1 + u) - 1` without cancellation for small `u`.
fn sqrt1p_m1(u: f64) -> f64 {
    u / ((1.0 + u).sqrt() + 1.0)
}

/// APR at which the untilted density already meets the mean constraint:
/// `(varsigma2 A + sqrt(1 + varsigma2 A) - 1) / (3 varsigma2 A)`.
pub fn alpha_star(varsigma2: f64, peak: f64) -> Result<f64> {
    if !(varsigma2 > 0.0) || !varsigma2.is_finite() {
        return Err(domain(format!(
            "alpha_star needs varsigma2 > 0 (the signal-independent limit is 1/2), got {varsigma2}"
        )));
    }
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(domain(format!("peak intensity must be positive, got {peak}")));
    }
    let u = varsigma2 * peak;
    // (u + u / (T + 1)) / (3u) with T = sqrt(1 + u)
    Ok((1.0 + 1.0 / (1.0 + (1.0 + u).sqrt())) / 3.0)
}

fn check_g_args(b: f64, varsigma2: f64, peak: f64) -> Result<()> {
    if !b.is_finite() {
        return Err(domain(format!("tilt must be finite, got {b}")));
    }
    if !(varsigma2 > 0.0) || !varsigma2.is_finite() {
        return Err(domain(format!("varsigma2 must be positive, got {varsigma2}")));
    }
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(domain(format!("peak intensity must be positive, got {peak}")));
    }
    Ok(())
}

/// `ln g` for `b < 0` from the error-function closed form.
fn ln_g_negative(b: f64, varsigma2: f64, peak: f64) -> f64 {
    let k = -b / varsigma2;
    let a = k.sqrt();
    let t_end = (1.0 + varsigma2 * peak).sqrt();
    let pref = PI.sqrt() / (2.0 * a);
    if a * t_end <= 1.0 {
        // e^{k} [erf(a T) - erf(a)]; both arguments are small
        (pref * k.exp() * (erf(a * t_end) - erf(a))).ln()
    } else {
        // e^{k} erfc(a) - e^{k} erfc(a T) = erfcx(a) - erfcx(a T) e^{b A}
        (pref * (erfcx(a) - erfcx(a * t_end) * (b * peak).exp())).ln()
    }
}

/// Break points for integrands `e^{k (t^2 - 1)}` on `[1, t_end]`, placed
/// where most of the mass sits when the tilt is strong.
fn tilt_breaks(k: f64, t_end: f64) -> Vec<f64> {
    let mut pts = vec![1.0];
    if k > 0.0 {
        let p = t_end - 30.0 / (2.0 * k * t_end);
        if p > 1.0 && p < t_end {
            pts.push(p);
        }
    } else if k < 0.0 {
        let p = 1.0 + 30.0 / (-2.0 * k);
        if p < t_end {
            pts.push(p);
        }
    }
    pts.push(t_end);
    pts
}

/// `ln int_1^{sqrt(1 + varsigma2 L)} e^{b (t^2 - 1) / varsigma2} dt` by quadrature,
/// scaled so the integrand never exceeds one.
fn ln_g_quadrature(b: f64, varsigma2: f64, upper: f64) -> Result<f64> {
    let k = b / varsigma2;
    let t_end = (1.0 + varsigma2 * upper).sqrt();
    let shift = (b * upper).max(0.0);
    let r = Quadrature::new()
        .rel_tol(INNER_REL_TOL)
        .integrate_with_breaks(|t| (k * (t * t - 1.0) - shift).exp(), &tilt_breaks(k, t_end))?;
    Ok(shift + r.value.ln())
}

/// Logarithm of `g(b, varsigma2, A)`; finite even when `g` itself overflows.
pub fn ln_g_factor(b: f64, varsigma2: f64, peak: f64) -> Result<f64> {
    check_g_args(b, varsigma2, peak)?;
    if b == 0.0 {
        Ok(sqrt1p_m1(varsigma2 * peak).ln())
    } else if b < 0.0 {
        Ok(ln_g_negative(b, varsigma2, peak))
    } else {
        ln_g_quadrature(b, varsigma2, peak)
    }
}

/// `g(b, varsigma2, A) = int_1^{sqrt(1 + varsigma2 A)} e^{b (t^2 - 1) / varsigma2} dt`.
///
/// Closed error-function form for `b < 0`, quadrature for `b > 0`, and
/// `sqrt(1 + varsigma2 A) - 1` at `b = 0`.
pub fn g_factor(b: f64, varsigma2: f64, peak: f64) -> Result<f64> {
    ln_g_factor(b, varsigma2, peak).map(f64::exp)
}

/// Logarithm of [`big_g`].
pub fn ln_big_g(b: f64, varsigma2: f64, peak: f64, delta: f64) -> Result<f64> {
    check_g_args(b, varsigma2, peak)?;
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(domain(format!("delta must be nonnegative, got {delta}")));
    }
    ln_g_quadrature(b, varsigma2, peak * (1.0 + delta))
}

/// `G(b, varsigma2, A, delta)`: the same integral as `g` extended to the
/// upper limit `sqrt(1 + varsigma2 A (1 + delta))`, always by quadrature.
pub fn big_g(b: f64, varsigma2: f64, peak: f64, delta: f64) -> Result<f64> {
    ln_big_g(b, varsigma2, peak, delta).map(f64::exp)
}

/// The tilted family `e^{b x} / sqrt(1 + varsigma2 x)` on `[0, L]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tilted {
    pub varsigma2: f64,
    pub end: f64,
}

impl Tilted {
    /// `ln int_0^L e^{b x} / sqrt(1 + varsigma2 x) dx`.
    pub fn ln_z(&self, b: f64) -> Result<f64> {
        if self.varsigma2 == 0.0 {
            Ok(self.end.ln() + ln_exprel(b * self.end))
        } else {
            Ok((2.0 / self.varsigma2).ln() + ln_g_factor(b, self.varsigma2, self.end)?)
        }
    }

    /// Mean of the normalized density with tilt `b`.
    pub fn mean(&self, b: f64) -> Result<f64> {
        let (vs2, a) = (self.varsigma2, self.end);
        let z = b * a;
        if vs2 == 0.0 {
            let frac = if z.abs() < 1e-2 { 0.5 + z / 12.0 - z.powi(3) / 720.0 } else { -1.0 / (-z).exp_m1() - 1.0 / z };
            return Ok(a * frac);
        }
        if b == 0.0 {
            return Ok(a * alpha_star(vs2, a)?);
        }
        if z.abs() < SMALL_TILT {
            let num = self.moment(b, &|x| x)?;
            let den = self.moment(b, &|_| 1.0)?;
            return Ok(num / den);
        }
        let t_end = (1.0 + vs2 * a).sqrt();
        let ln_g = ln_g_factor(b, vs2, a)?;
        let first = if b < 0.0 {
            (t_end * z.exp() - 1.0) / (2.0 * b * ln_g.exp())
        } else {
            (t_end - (-z).exp()) / (2.0 * b * (ln_g - z).exp())
        };
        Ok(first - 1.0 / (2.0 * b) - 1.0 / vs2)
    }

    /// `int h(x) e^{b x - shift} / sqrt(1 + varsigma2 x) dx` over `[0, L]`
    /// with `shift = max(0, b L)`, up to the constant Jacobian factor.
    ///
    /// For `varsigma2 > 0` the integral is taken in `t = sqrt(1 + varsigma2 x)`,
    /// where the weight is the smooth `e^{b (t^2 - 1) / varsigma2}` and the
    /// returned value is `varsigma2 / 2` times the `x`-integral.
    pub fn moment(&self, b: f64, h: &dyn Fn(f64) -> f64) -> Result<f64> {
        let shift = (b * self.end).max(0.0);
        if self.varsigma2 == 0.0 {
            let mut pts = vec![0.0];
            if b != 0.0 {
                let p = if b > 0.0 { self.end - 30.0 / b } else { -30.0 / b };
                if p > 0.0 && p < self.end {
                    pts.push(p);
                }
            }
            pts.push(self.end);
            let r = Quadrature::new()
                .rel_tol(INNER_REL_TOL)
                .integrate_with_breaks(|x| h(x) * (b * x - shift).exp(), &pts)?;
            return Ok(r.value);
        }
        let vs2 = self.varsigma2;
        let k = b / vs2;
        let t_end = (1.0 + vs2 * self.end).sqrt();
        let r = Quadrature::new().rel_tol(INNER_REL_TOL).integrate_with_breaks(
            |t| {
                let x = (t * t - 1.0) / vs2;
                h(x) * (k * (t * t - 1.0) - shift).exp()
            },
            &tilt_breaks(k, t_end),
        )?;
        Ok(r.value)
    }
}

/// `ln((e^z - 1) / z)`, finite for all real `z`.
fn ln_exprel(z: f64) -> f64 {
    if z.abs() < 1e-5 {
        z / 2.0 + z * z / 24.0
    } else if z > 0.0 {
        z + (-(-z).exp_m1()).ln() - z.ln()
    } else {
        (z.exp_m1() / z).ln()
    }
}

/// Right-hand side of the mean equation for the tilt `b`: the mean of the
/// normalized density `e^{bx} / sqrt(1 + varsigma2 x)` on `[0, A]`.
///
/// For `b != 0` and `varsigma2 > 0` this is
/// `(sqrt(1 + varsigma2 A) e^{bA} - 1) / (2 b g) - 1 / (2b) - 1 / varsigma2`.
pub fn tilted_mean(b: f64, params: &ChannelParams, peak: f64) -> Result<f64> {
    Tilted { varsigma2: params.varsigma2, end: peak }.mean(b)
}

/// Solves for the tilt `b` that meets the mean constraint.
///
/// `tol` bounds the residual of the scaled mean equation
/// `mean(b) / A - xi P / A`.
pub fn solve_b(params: ChannelParams, cons: PeakAvgConstraints, tol: f64) -> Result<PeakAvgInputDist> {
    params.validate()?;
    cons.validate()?;
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let vs2 = params.varsigma2;
    let peak = cons.peak;
    let alpha = cons.apr();
    let family = Tilted { varsigma2: vs2, end: peak };
    let a_star = if vs2 > 0.0 { alpha_star(vs2, peak)? } else { 0.5 };

    if (alpha - a_star).abs() < ZERO_B_CASE_TOL {
        return Ok(PeakAvgInputDist {
            branch: Branch::ZeroB,
            b: 0.0,
            ln_normalizer: family.ln_z(0.0)?,
            params,
            constraints: cons,
        });
    }
    if alpha >= 1.0 {
        return Err(Error::Solver(format!(
            "average equals the peak (APR = {alpha}); no density on [0, A] has that mean"
        )));
    }

    let failure: Cell<Option<Error>> = Cell::new(None);
    let scaled = |b: f64| -> f64 {
        match family.mean(b) {
            Ok(m) => m / peak - alpha,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };

    let step = 1.0 / cons.average();
    let (lo, hi) = if alpha > a_star {
        let mut lo = 0.0;
        let mut hi = step;
        loop {
            let v = scaled(hi);
            if let Some(e) = failure.take() {
                return Err(e);
            }
            if v >= 0.0 {
                break;
            }
            lo = hi;
            hi *= 4.0;
            if hi > MAX_TILT {
                return Err(Error::Solver(format!(
                    "tilt bracket exceeded b = {MAX_TILT:e}; last bracket [{lo}, {hi}]"
                )));
            }
        }
        (lo, hi)
    } else {
        let mut hi = 0.0;
        let mut lo = -step;
        loop {
            let v = scaled(lo);
            if let Some(e) = failure.take() {
                return Err(e);
            }
            if v <= 0.0 {
                break;
            }
            hi = lo;
            lo *= 4.0;
            if -lo > MAX_TILT {
                return Err(Error::Solver(format!(
                    "tilt bracket exceeded |b| = {MAX_TILT:e}; last bracket [{lo}, {hi}]"
                )));
            }
        }
        (lo, hi)
    };

    let root = find_root(scaled, lo, hi, tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let root = root?;
    Ok(PeakAvgInputDist {
        branch: Branch::NonzeroB,
        b: root.root,
        ln_normalizer: family.ln_z(root.root)?,
        params,
        constraints: cons,
    })
}

impl PeakAvgInputDist {
    fn family(&self) -> Tilted {
        Tilted { varsigma2: self.params.varsigma2, end: self.constraints.peak }
    }

    /// `Z = 2 g / varsigma2`, the normalizer of `e^{bx} / sqrt(1 + varsigma2 x)`.
    pub fn normalizer(&self) -> f64 {
        self.ln_normalizer.exp()
    }

    /// Residual of the scaled mean equation, `(mean(b) - xi P) / A`.
    pub fn mean_equation_residual(&self) -> Result<f64> {
        let mean = match self.branch {
            Branch::ZeroB => {
                if self.params.varsigma2 > 0.0 {
                    alpha_star(self.params.varsigma2, self.constraints.peak)? * self.constraints.peak
                } else {
                    0.5 * self.constraints.peak
                }
            }
            Branch::NonzeroB => self.family().mean(self.b)?,
        };
        Ok((mean - self.constraints.average()) / self.constraints.peak)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if !(0.0..=self.constraints.peak).contains(&x) {
            return f64::NEG_INFINITY;
        }
        self.b * x - self.ln_normalizer - 0.5 * (self.params.varsigma2 * x).ln_1p()
    }

    /// Mass on `[0, x]`.
    fn cdf_inner(&self, x: f64) -> Result<f64> {
        let peak = self.constraints.peak;
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x >= peak {
            return Ok(1.0);
        }
        let vs2 = self.params.varsigma2;
        let b = self.b;
        if vs2 == 0.0 {
            if b == 0.0 {
                return Ok(x / peak);
            }
            if b < 0.0 {
                return Ok((b * x).exp_m1() / (b * peak).exp_m1());
            }
            return Ok((b * (x - peak)).exp() * (-(-b * x).exp_m1()) / (-(-b * peak).exp_m1()));
        }
        if b == 0.0 {
            return Ok(sqrt1p_m1(vs2 * x) / sqrt1p_m1(vs2 * peak));
        }
        if b < 0.0 {
            return Ok((ln_g_negative(b, vs2, x) - ln_g_negative(b, vs2, peak)).exp().min(1.0));
        }
        // upper tail from tau to T, scaled by e^{-bA}
        let k = b / vs2;
        let tau = (1.0 + vs2 * x).sqrt();
        let t_end = (1.0 + vs2 * peak).sqrt();
        let shift = b * peak;
        let mut pts = tilt_breaks(k, t_end);
        pts.retain(|&p| p > tau);
        pts.insert(0, tau);
        let tail = Quadrature::new()
            .rel_tol(INNER_REL_TOL)
            .integrate_with_breaks(|t| (k * (t * t - 1.0) - shift).exp(), &pts)?
            .value;
        let total = (ln_g_factor(b, vs2, peak)? - shift).exp();
        Ok((1.0 - tail / total).clamp(0.0, 1.0))
    }
}

impl InputDistribution for PeakAvgInputDist {
    fn params(&self) -> ChannelParams {
        self.params
    }

    fn average(&self) -> f64 {
        self.constraints.average()
    }

    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        self.cdf_inner(x).unwrap_or(f64::NAN)
    }

    fn support_end(&self) -> f64 {
        self.constraints.peak
    }

    fn effective_end(&self) -> f64 {
        self.constraints.peak
    }

    fn expectation(&self, h: &dyn Fn(f64) -> f64) -> Result<f64> {
        let family = self.family();
        let num = family.moment(self.b, h)?;
        let den = family.moment(self.b, &|_| 1.0)?;
        Ok(num / den)
    }

    /// `ln Z - b xi P + 1/2 E[ln(1 + varsigma2 X)]`.
    fn input_entropy(&self) -> Result<f64> {
        Ok(self.ln_normalizer - self.b * self.average() + 0.5 * self.mean_log_variance_factor()?)
    }
}

impl PeakAvgInputDist {
    /// Break points for `x`-space quadrature of functions of this density.
    pub fn breaks(&self) -> Vec<f64> {
        decade_breaks(self.params.varsigma2, self.constraints.peak)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(vs2: f64) -> ChannelParams {
        ChannelParams::new(1.0, vs2).unwrap()
    }

    #[test]
    fn alpha_star_exact_and_limits() {
        assert!((alpha_star(1.5, 10.0).unwrap() - 0.4).abs() < 1e-15);
        assert!((alpha_star(1.0, 1e300).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((alpha_star(1e-300, 1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(alpha_star(0.0, 1.0).is_err());
    }

    #[test]
    fn g_at_zero_tilt() {
        let g = g_factor(0.0, 1.5, 1.0).unwrap();
        assert!((g - (2.5f64.sqrt() - 1.0)).abs() < 1e-15);
        let g = g_factor(-1e-12, 1.5, 1.0).unwrap();
        assert!((g - (2.5f64.sqrt() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn g_positive_tilt_dominates_unit_integrand() {
        for &(b, vs2, a) in &[(0.01, 1.5, 10.0), (2.0, 0.5, 3.0), (1e-3, 5.0, 1e4)] {
            assert!(g_factor(b, vs2, a).unwrap() >= sqrt1p_m1(vs2 * a));
        }
    }

    #[test]
    fn g_closed_form_matches_quadrature_for_negative_tilt() {
        for &(b, vs2, a) in &[(-0.5, 1.5, 10.0), (-1e-4, 1.5, 1e3), (-3.0, 0.2, 100.0), (-1e-3, 5.0, 1e6)] {
            let closed = ln_g_factor(b, vs2, a).unwrap();
            let quad = ln_g_quadrature(b, vs2, a).unwrap();
            assert!((closed.exp() / quad.exp() - 1.0).abs() < 1e-10, "{b} {vs2} {a}");
        }
    }

    #[test]
    fn zero_b_branch_selected_at_alpha_star() {
        let a = 10.0;
        let xi_p = alpha_star(1.5, a).unwrap() * a;
        let d = solve_b(params(1.5), PeakAvgConstraints::new(a, 1.0, xi_p).unwrap(), 1e-12).unwrap();
        assert_eq!(d.branch, Branch::ZeroB);
        assert_eq!(d.b, 0.0);
        // pdf(0) = varsigma2 / (2 (sqrt(16) - 1)) = 0.25
        assert!((d.pdf(0.0) - 0.25).abs() < 1e-15);
        assert_eq!(d.pdf(-1.0), 0.0);
        assert_eq!(d.pdf(a + 1.0), 0.0);
    }

    #[test]
    fn tilt_sign_follows_apr() {
        let lo = solve_b(params(1.5), PeakAvgConstraints::new(10.0, 1.0, 2.0).unwrap(), 1e-12).unwrap();
        assert!(lo.b < 0.0);
        let hi = solve_b(params(1.5), PeakAvgConstraints::new(10.0, 1.0, 6.0).unwrap(), 1e-12).unwrap();
        assert!(hi.b > 0.0);
        assert!(lo.mean_equation_residual().unwrap().abs() < 1e-12);
        assert!(hi.mean_equation_residual().unwrap().abs() < 1e-12);
    }

    #[test]
    fn full_apr_is_a_solver_error() {
        let c = PeakAvgConstraints::new(10.0, 1.0, 10.0).unwrap();
        assert!(matches!(solve_b(params(1.5), c, 1e-12), Err(Error::Solver(_))));
    }

    #[test]
    fn signal_independent_limit_is_truncated_exponential() {
        let d = solve_b(params(0.0), PeakAvgConstraints::new(10.0, 1.0, 3.0).unwrap(), 1e-12).unwrap();
        assert!(d.b < 0.0);
        // density b e^{bx} / (e^{bA} - 1)
        let expected = d.b * (d.b * 4.0).exp() / (d.b * 10.0).exp_m1();
        assert!((d.pdf(4.0) / expected - 1.0).abs() < 1e-12);
        let mid = solve_b(params(0.0), PeakAvgConstraints::new(10.0, 1.0, 5.0).unwrap(), 1e-12).unwrap();
        assert_eq!(mid.branch, Branch::ZeroB);
    }

    #[test]
    fn small_tilt_mean_is_continuous() {
        let fam = Tilted { varsigma2: 1.5, end: 100.0 };
        let below = fam.mean(SMALL_TILT / 100.0 * 0.999_999_999_99).unwrap();
        let above = fam.mean(SMALL_TILT / 100.0 * 1.000_000_000_01).unwrap();
        assert!((below - above).abs() / above < 1e-10, "{below} {above}");
        let neg_below = fam.mean(-SMALL_TILT / 100.0 * 0.999_999_999_99).unwrap();
        let neg_above = fam.mean(-SMALL_TILT / 100.0 * 1.000_000_000_01).unwrap();
        assert!((neg_below - neg_above).abs() / neg_above < 1e-10, "{neg_below} {neg_above}");
    }

    #[test]
    fn cdf_is_monotone_and_hits_endpoints() {
        for &xi_p in &[2.0, 6.0] {
            let d = solve_b(params(1.5), PeakAvgConstraints::new(10.0, 1.0, xi_p).unwrap(), 1e-12).unwrap();
            let mut prev = 0.0;
            for i in 0..=100 {
                let x = 10.0 * i as f64 / 100.0;
                let f = d.cdf(x);
                assert!(f >= prev - 1e-15);
                prev = f;
            }
            assert!((prev - 1.0).abs() < 1e-15);
            assert_eq!(d.cdf(0.0), 0.0);
        }
    }
}
