//! Special functions, adaptive quadrature and bracketed root finding.
//!
//! Everything here is a pure function of its arguments.

mod quadrature;
mod roots;
mod special;

pub use quadrature::{integrate, Quadrature, QuadratureResult};
pub use roots::{find_root, RootFinder, RootResult};
pub use special::{erf, erf_fn, erfc, erfcx, gauss_q, q_unchecked, sqrt_pi_x_erfcx_excess};

/// Default relative tolerance for quadrature.
pub const DEFAULT_REL_TOL: f64 = 1e-10;
/// Default residual tolerance for root finding.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Default evaluation budget for quadrature.
pub const DEFAULT_MAX_EVALS: usize = 1_000_000;
