//! Receiver noise currents and their mapping onto `(sigma2, varsigma2)`.
//!
//! Shot noise from the signal grows with the received intensity and becomes
//! the signal-dependent term; background shot noise, dark current, thermal
//! and amplifier noise are signal-independent.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Physical receiver inputs (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseInputs {
    /// Electron charge (C).
    pub q: f64,
    /// Quantum efficiency.
    pub eta: f64,
    /// Photon energy `h nu` (J).
    pub h_nu: f64,
    /// Bandwidth (Hz).
    pub bandwidth: f64,
    /// Received optical intensity (W).
    pub x: f64,
    /// Background optical intensity (W).
    pub x_b: f64,
    /// Dark current (A).
    pub i_dark: f64,
    /// Boltzmann constant (J/K).
    pub k: f64,
    /// Temperature (K).
    pub t: f64,
    /// Equivalent resistance of bias and load in parallel (ohm).
    pub r_e: f64,
    /// Amplifier input resistance (ohm).
    pub r_amp: f64,
    /// Watts per unit of intensity in the normalized model.
    pub unit: f64,
}

impl NoiseInputs {
    /// 550 nm light, 300 K, 10 MHz, 1 mW received, 50 ohm front end.
    pub fn representative() -> Self {
        let h = 6.626_070_15e-34;
        let c = 299_792_458.0;
        Self {
            q: 1.602_176_634e-19,
            eta: 0.8,
            h_nu: h * c / 550e-9,
            bandwidth: 1e7,
            x: 1e-3,
            x_b: 1e-4,
            i_dark: 1e-9,
            k: 1.380_649e-23,
            t: 300.0,
            r_e: 50.0,
            r_amp: 50.0,
            unit: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("q", self.q),
            ("eta", self.eta),
            ("bandwidth", self.bandwidth),
            ("x", self.x),
            ("x_b", self.x_b),
            ("i_dark", self.i_dark),
            ("k", self.k),
            ("t", self.t),
        ];
        for (name, v) in fields {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} must be nonnegative and finite, got {v}")));
            }
        }
        for (name, v) in [("h_nu", self.h_nu), ("r_e", self.r_e), ("r_amp", self.r_amp), ("unit", self.unit)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// RMS noise currents of the receiver (A).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseBudget {
    pub i_s: f64,
    pub i_b: f64,
    pub i_d_rms: f64,
    pub i_th: f64,
    pub i_a: f64,
    pub inputs: NoiseInputs,
}

impl NoiseBudget {
    pub fn from_inputs(inputs: NoiseInputs) -> Result<Self> {
        let (i_s, i_b, i_d_rms) = shot_noise(&inputs)?;
        Ok(Self {
            i_s,
            i_b,
            i_d_rms,
            i_th: thermal_noise(inputs.k, inputs.t, inputs.bandwidth, inputs.r_e)?,
            i_a: amplifier_noise(inputs.k, inputs.t, inputs.bandwidth, inputs.r_amp)?,
            inputs,
        })
    }
}

/// Shot noise from the signal, the background and the dark current.
pub fn shot_noise(inputs: &NoiseInputs) -> Result<(f64, f64, f64)> {
    inputs.validate()?;
    let per_watt = 2.0 * inputs.q * inputs.q * inputs.eta * inputs.bandwidth / inputs.h_nu;
    Ok((
        (per_watt * inputs.x).sqrt(),
        (per_watt * inputs.x_b).sqrt(),
        (2.0 * inputs.q * inputs.i_dark * inputs.bandwidth).sqrt(),
    ))
}

fn check_johnson(k: f64, t: f64, bandwidth: f64, r: f64) -> Result<()> {
    if !(k > 0.0 && t > 0.0 && bandwidth > 0.0) || !(k * t * bandwidth).is_finite() {
        return Err(domain(format!("K, T and B must be positive, got {k}, {t}, {bandwidth}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain(format!("resistance must be positive, got {r}")));
    }
    Ok(())
}

/// `sqrt(4 K T B / R_e)`.
pub fn thermal_noise(k: f64, t: f64, bandwidth: f64, r_e: f64) -> Result<f64> {
    check_johnson(k, t, bandwidth, r_e)?;
    Ok((4.0 * k * t * bandwidth / r_e).sqrt())
}

/// `sqrt(2 K T B / r_e)`.
pub fn amplifier_noise(k: f64, t: f64, bandwidth: f64, r_amp: f64) -> Result<f64> {
    check_johnson(k, t, bandwidth, r_amp)?;
    Ok((2.0 * k * t * bandwidth / r_amp).sqrt())
}

/// Maps the currents onto the normalized model, returning `(varsigma2, sigma2)`.
///
/// `scale` converts squared current into the units of the normalized
/// output: `sigma2 = scale * (i_b^2 + i_d^2 + i_th^2 + i_a^2)` and the
/// signal-dependent coefficient is `scale * i_s^2 / X`, so
/// `varsigma2 = i_s^2 / (X (i_b^2 + i_d^2 + i_th^2 + i_a^2))`, with `X`
/// measured in multiples of `inputs.unit`.
pub fn variance_split(budget: &NoiseBudget, scale: f64) -> Result<(f64, f64)> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(domain(format!("conversion scale must be positive, got {scale}")));
    }
    let independent = budget.i_b.powi(2) + budget.i_d_rms.powi(2) + budget.i_th.powi(2) + budget.i_a.powi(2);
    let sigma2 = scale * independent;
    if !(sigma2 > 0.0) {
        return Err(Error::DegenerateSplit);
    }
    if budget.i_s == 0.0 {
        return Ok((0.0, sigma2));
    }
    let coeff = scale * budget.i_s.powi(2) / (budget.inputs.x / budget.inputs.unit);
    Ok((coeff / sigma2, sigma2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dark_only_budget() {
        let mut inp = NoiseInputs::representative();
        inp.x = 0.0;
        let b = NoiseBudget::from_inputs(inp).unwrap();
        assert_eq!(b.i_s, 0.0);
        assert_eq!(variance_split(&b, 1.0).unwrap().0, 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut inp = NoiseInputs::representative();
        inp.r_e = 0.0;
        assert!(NoiseBudget::from_inputs(inp).is_err());
        inp = NoiseInputs::representative();
        inp.eta = -0.1;
        assert!(shot_noise(&inp).is_err());
        assert!(thermal_noise(1.38e-23, 300.0, 1e7, -5.0).is_err());
    }

    #[test]
    fn degenerate_split() {
        let b = NoiseBudget {
            i_s: 1.0,
            i_b: 0.0,
            i_d_rms: 0.0,
            i_th: 0.0,
            i_a: 0.0,
            inputs: NoiseInputs::representative(),
        };
        assert!(matches!(variance_split(&b, 1.0), Err(Error::DegenerateSplit)));
    }
}
