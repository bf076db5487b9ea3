use thiserror::Error;

/// Errors raised by the numerical routines, solvers and oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimate {estimate} with error {est_error} after {evaluations} evaluations")]
    Convergence { estimate: f64, est_error: f64, evaluations: usize },

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder exhausted {iterations} iterations; last bracket [{lo}, {hi}]")]
    RootBudget { lo: f64, hi: f64, iterations: usize },

    #[error("solver error: {0}")]
    Solver(String),

    #[error("infeasible density: {0}")]
    Infeasible(String),

    #[error("degenerate noise split: signal-independent variance is zero")]
    DegenerateSplit,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
