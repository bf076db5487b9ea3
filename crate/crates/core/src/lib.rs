//! Capacity bounds for optical-intensity channels with signal-dependent
//! Gaussian noise.
//!
//! The received signal is modeled as `Y = X + sqrt(X) Z1 + Z0` with
//! `Z0 ~ N(0, sigma2)` and `Z1 ~ N(0, varsigma2 * sigma2)`, so the
//! conditional variance grows linearly with the transmitted intensity.
//! Inputs are nonnegative and either constrained in peak and average
//! (`0 <= X <= A`, `E[X] = xi * P`) or in average only.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: error functions, adaptive Gauss-Kronrod quadrature and a
//!   bracketed Brent root finder.
//! * [`input`]: the entropy-maximizing input densities, their solvers,
//!   samplers and the variational functional they minimize.
//! * [`bounds`]: closed-form lower/upper capacity bounds, gaps and
//!   asymptotic gaps.
//! * [`channel`]: the channel itself and independent quadrature and
//!   Monte-Carlo oracles for mutual information.
//! * [`noise`]: receiver noise currents and their mapping onto the
//!   normalized `(sigma2, varsigma2)` model.
//!
//! All information quantities are in nats.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channel;
mod error;
pub mod input;
pub mod noise;
pub mod numerics;

pub use error::{Error, Result};
pub use input::{
    AvgOnlyConstraints, AvgOnlyInputDist, Branch, ChannelParams, InputDistribution, PeakAvgConstraints,
    PeakAvgInputDist,
};

/// Converts an intensity in dB (relative to unit noise standard deviation) to linear scale.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Inverse of [`from_db`].
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
