//! Evaluation of sweep grids.

use rayon::prelude::*;
use vlc_capacity::bounds::{report_avg_only, report_peak_avg, shannon_awgn, UpperBoundParams};
use vlc_capacity::channel::{mutual_information, mutual_information_monte_carlo};
use vlc_capacity::input::{solve_b, solve_mn, InputDistribution};
use vlc_capacity::{from_db, AvgOnlyConstraints, Branch, ChannelParams, PeakAvgConstraints};

use crate::config::{Scenario, SweepConfig, SweepVar};
use crate::CliError;

/// Root tolerance passed to the input-distribution solvers.
pub const SOLVER_TOL: f64 = 1e-12;

/// Scenario-specific solver output recorded with each row.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverInfo {
    PeakAvg { b: f64, branch: Branch },
    AvgOnly { m: f64, n: f64 },
    Awgn { snr: f64 },
}

/// Values of one grid point; everything but `value` is absent when `error` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub c_low: Option<f64>,
    pub c_upp: Option<f64>,
    pub gap: Option<f64>,
    pub asymptotic_gap: Option<f64>,
    pub solver: Option<SolverInfo>,
    pub mi: Option<f64>,
    pub mi_error: Option<f64>,
    pub mc_mi: Option<f64>,
    pub mc_std_error: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(value: f64, msg: String) -> Self {
        Self {
            value,
            c_low: None,
            c_upp: None,
            gap: None,
            asymptotic_gap: None,
            solver: None,
            mi: None,
            mi_error: None,
            mc_mi: None,
            mc_std_error: None,
            error: Some(msg),
        }
    }
}

/// Intensity for a dB value, relative to the noise standard deviation.
pub fn intensity(db: f64, sigma2: f64) -> f64 {
    sigma2.sqrt() * from_db(db)
}

/// Channel parameters and constraints at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub params: ChannelParams,
    pub xi: f64,
    /// Peak `A`; only meaningful with a peak constraint.
    pub peak: f64,
    pub nominal: f64,
}

pub fn resolve(config: &SweepConfig, v: f64) -> Result<Point, CliError> {
    let f = &config.fixed;
    let (mut xi, mut varsigma2) = (f.xi, f.varsigma2);
    match config.sweep_var {
        SweepVar::Xi => xi = v,
        SweepVar::Varsigma2 => varsigma2 = v,
        _ => {}
    }
    let (peak, nominal) = match (config.scenario, config.sweep_var) {
        (Scenario::PeakAvg, SweepVar::ADb) => {
            let a = intensity(v, f.sigma2);
            (a, a / f.a_over_p)
        }
        (Scenario::PeakAvg, SweepVar::PDb) => {
            let p = intensity(v, f.sigma2);
            (f.a_over_p * p, p)
        }
        (Scenario::PeakAvg, _) => {
            let a = intensity(f.a_db, f.sigma2);
            (a, a / f.a_over_p)
        }
        (_, SweepVar::ADb) => {
            return Err(CliError::Usage(format!(
                "{}: the {} scenario has no peak intensity to sweep",
                config.label, config.scenario
            )))
        }
        (_, SweepVar::PDb) => (f64::INFINITY, intensity(v, f.sigma2)),
        _ => (f64::INFINITY, intensity(f.p_db, f.sigma2)),
    };
    Ok(Point { params: ChannelParams { sigma2: f.sigma2, varsigma2 }, xi, peak, nominal })
}

fn add_oracles(row: &mut SweepRow, config: &SweepConfig, dist: &dyn InputDistribution) -> vlc_capacity::Result<()> {
    if config.oracles.mi {
        let r = mutual_information(dist)?;
        row.mi = Some(r.mi);
        row.mi_error = Some(r.quadrature_error);
    }
    if config.oracles.monte_carlo {
        let r = mutual_information_monte_carlo(dist, config.mc_samples, config.seed)?;
        row.mc_mi = Some(r.mi);
        row.mc_std_error = Some(r.std_error);
    }
    Ok(())
}

fn evaluate(config: &SweepConfig, v: f64) -> Result<SweepRow, String> {
    let pt = resolve(config, v).map_err(|e| e.to_string())?;
    let f = &config.fixed;
    let ub = UpperBoundParams::new(f.beta, f.delta).map_err(|e| e.to_string())?;
    let mut row = SweepRow::failed(v, String::new());
    row.error = None;
    let core = |e: vlc_capacity::Error| e.to_string();
    match config.scenario {
        Scenario::PeakAvg => {
            let cons = PeakAvgConstraints::new(pt.peak, pt.xi, pt.nominal).map_err(core)?;
            let dist = solve_b(pt.params, cons, SOLVER_TOL).map_err(core)?;
            let rep = report_peak_avg(&dist, &ub).map_err(core)?;
            row.c_low = Some(rep.c_low);
            row.c_upp = Some(rep.c_upp);
            row.gap = Some(rep.gap);
            row.asymptotic_gap = Some(rep.asymptotic_gap);
            row.solver = Some(SolverInfo::PeakAvg { b: dist.b, branch: dist.branch });
            add_oracles(&mut row, config, &dist).map_err(core)?;
        }
        Scenario::AvgOnly => {
            let cons = AvgOnlyConstraints::new(pt.xi, pt.nominal).map_err(core)?;
            let dist = solve_mn(pt.params, cons, SOLVER_TOL).map_err(core)?;
            let rep = report_avg_only(&dist, ub.beta).map_err(core)?;
            row.c_low = Some(rep.c_low);
            row.c_upp = Some(rep.c_upp);
            row.gap = Some(rep.gap);
            row.asymptotic_gap = Some(rep.asymptotic_gap);
            row.solver = Some(SolverInfo::AvgOnly { m: dist.m, n: dist.n });
            add_oracles(&mut row, config, &dist).map_err(core)?;
        }
        Scenario::Awgn => {
            let snr = pt.nominal * pt.nominal / pt.params.sigma2;
            let c = shannon_awgn(snr).map_err(core)?;
            row.c_low = Some(c);
            row.solver = Some(SolverInfo::Awgn { snr });
        }
    }
    Ok(row)
}

fn evaluate_row(config: &SweepConfig, v: f64) -> SweepRow {
    evaluate(config, v).unwrap_or_else(|msg| SweepRow::failed(v, msg))
}

/// One row per grid point, in grid order. Points that cannot be solved
/// produce a row with `error` set; the sweep itself does not stop.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    config.validate()?;
    Ok(config.grid.par_iter().map(|&v| evaluate_row(config, v)).collect())
}

/// Runs several curves with all grid points evaluated in parallel.
pub fn run_curves(curves: &[SweepConfig]) -> Result<Vec<Vec<SweepRow>>, CliError> {
    for c in curves {
        c.validate()?;
        resolve(c, c.grid[0])?;
    }
    let tasks: Vec<(usize, f64)> =
        curves.iter().enumerate().flat_map(|(i, c)| c.grid.iter().map(move |&v| (i, v))).collect();
    let rows: Vec<(usize, SweepRow)> = tasks.par_iter().map(|&(i, v)| (i, evaluate_row(&curves[i], v))).collect();
    let mut out = vec![Vec::new(); curves.len()];
    for (i, r) in rows {
        out[i].push(r);
    }
    Ok(out)
}
