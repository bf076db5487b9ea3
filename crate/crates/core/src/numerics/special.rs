use std::f64::consts::PI;

use crate::error::{domain, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Error function. NaN in, NaN out.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function `1 - erf(x)`, accurate in the far tail.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `exp(x^2) * erfc(x)`.
///
/// Stays finite and relatively accurate for large positive `x` where
/// `erfc` alone underflows.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        // erfcx(-x) = 2 exp(x^2) - erfcx(x)
        return 2.0 * exp_square(x) - erfcx(-x);
    }
    if x < 26.0 {
        exp_square(x) * erfc(x)
    } else {
        // asymptotic series; at x >= 26 the ratio of successive terms is < 1e-3
        let inv2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..10 {
            term *= -((2 * k - 1) as f64) * inv2;
            sum += term;
        }
        FRAC_1_SQRT_PI / x * sum
    }
}

/// `exp(x^2)` with the rounding error of `x*x` folded back in.
fn exp_square(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    hi.exp() * (1.0 + lo)
}

/// `1 / (sqrt(pi) * x * erfcx(x)) - 1` for `x > 0`, without cancellation
/// for large `x`.
///
/// Uses the continued fraction
/// `sqrt(pi) erfcx(x) = 1 / (x + (1/2) / (x + 1 / (x + (3/2) / (x + ...))))`,
/// which makes the quantity equal to the tail of the fraction divided by `x`.
pub fn sqrt_pi_x_erfcx_excess(x: f64) -> f64 {
    if x < 2.5 {
        return 1.0 / (PI.sqrt() * x * erfcx(x)) - 1.0;
    }
    let mut tail = 0.0;
    for k in (1..=200).rev() {
        tail = (k as f64 / 2.0) / (x + tail);
    }
    tail / x
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)` without the finiteness check.
pub fn q_unchecked(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Gaussian Q-function, the standard-normal upper tail probability.
pub fn gauss_q(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("gauss_q argument must be finite, got {x}")));
    }
    Ok(q_unchecked(x))
}

/// Error function with a finiteness check on the argument.
pub fn erf_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("erf argument must be finite, got {x}")));
    }
    Ok(erf(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn erf_series(x: f64) -> f64 {
        // Maclaurin series 2/sqrt(pi) sum (-1)^n x^(2n+1) / (n! (2n+1))
        let mut sum = 0.0;
        let mut pow = x;
        let mut fact = 1.0;
        for n in 0..60 {
            let term = pow / (fact * (2 * n + 1) as f64);
            sum += if n % 2 == 0 { term } else { -term };
            pow *= x * x;
            fact *= (n + 1) as f64;
        }
        2.0 / PI.sqrt() * sum
    }

    #[test]
    fn erf_matches_series() {
        assert!((erf_fn(1.0).unwrap() - 0.8427008).abs() < 1e-7);
        for &x in &[0.1, 0.5, 1.0, 1.5, 2.0] {
            assert!((erf(x) - erf_series(x)).abs() < 1e-14, "x = {x}");
        }
        assert_eq!(erf_fn(0.0).unwrap(), 0.0);
        assert_eq!(erf_fn(-0.4).unwrap(), -erf_fn(0.4).unwrap());
    }

    #[test]
    fn non_finite_arguments_are_rejected() {
        assert!(erf_fn(f64::NAN).is_err());
        assert!(gauss_q(f64::INFINITY).is_err());
    }

    #[test]
    fn q_symmetry_and_center() {
        assert_eq!(gauss_q(0.0).unwrap(), 0.5);
        let sum = gauss_q(1.7).unwrap() + gauss_q(-1.7).unwrap();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn erfcx_is_continuous_across_branch_switch() {
        let below = erfcx(26.0 - 1e-12);
        let above = erfcx(26.0);
        assert!((below / above - 1.0).abs() < 1e-12);
        // erfcx(x) ~ 1/(sqrt(pi) x) for large x
        let big = 1e8;
        assert!((erfcx(big) * big * PI.sqrt() - 1.0).abs() < 1e-15);
        assert!((erfcx(0.0) - 1.0).abs() < 1e-16);
        assert!((erfcx(-1.0) - 2.0 * 1f64.exp() + erfcx(1.0)).abs() < 1e-14);
    }

    #[test]
    fn excess_branches_agree() {
        for &x in &[2.5, 3.0, 4.0, 6.0] {
            let direct = 1.0 / (PI.sqrt() * x * erfcx(x)) - 1.0;
            let cf = sqrt_pi_x_erfcx_excess(x);
            assert!((direct / cf - 1.0).abs() < 1e-11, "x = {x}: {direct} vs {cf}");
        }
        // leading behaviour 1/(2x^2)
        let x = 1e4;
        assert!((sqrt_pi_x_erfcx_excess(x) * 2.0 * x * x - 1.0).abs() < 1e-7);
    }
}
