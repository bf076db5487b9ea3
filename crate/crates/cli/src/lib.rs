//! Parameter sweeps and single-point bound reports on top of `vlc-capacity`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod presets;
pub mod sweep;

use std::io;

use serde_json::json;
use vlc_capacity::bounds::{report_avg_only, report_peak_avg, BoundReport, UpperBoundParams};
use vlc_capacity::channel::{mutual_information, MutualInfoResult};
use vlc_capacity::input::{solve_b, solve_mn, Branch};
use vlc_capacity::{AvgOnlyConstraints, ChannelParams, PeakAvgConstraints};

pub use config::{Oracles, Scenario, SweepConfig, SweepVar};
pub use output::{emit_csv, write_sweep};
pub use presets::{preset, Preset};
pub use sweep::{run_curves, run_sweep, SweepRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] vlc_capacity::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad input, 3 for solver or convergence failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Core(vlc_capacity::Error::Domain(_)) => 2,
            Self::Core(_) => 3,
            Self::Io(_) | Self::Csv(_) => 1,
        }
    }
}

/// Applies `key=value` overrides to every curve of a preset.
pub fn apply_overrides(preset: &mut Preset, settings: &[(String, String)]) -> Result<(), CliError> {
    for c in &mut preset.curves {
        for (k, v) in settings {
            c.set(k, v)?;
        }
    }
    Ok(())
}

/// Inputs of a single-point bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsQuery {
    pub scenario: Scenario,
    pub params: ChannelParams,
    pub xi: f64,
    /// Peak intensity; ignored without a peak constraint.
    pub peak: f64,
    pub nominal: f64,
    pub ub: UpperBoundParams,
    pub with_mi: bool,
}

#[derive(Debug, Clone)]
pub struct BoundsOutput {
    pub query: BoundsQuery,
    pub report: BoundReport,
    /// Peak-constrained scenario only.
    pub branch: Option<Branch>,
    pub mi: Option<MutualInfoResult>,
}

pub fn evaluate_bounds(q: &BoundsQuery) -> Result<BoundsOutput, CliError> {
    q.ub.validate()?;
    let tol = sweep::SOLVER_TOL;
    let mut branch = None;
    let (report, mi) = match q.scenario {
        Scenario::PeakAvg => {
            let d = solve_b(q.params, PeakAvgConstraints::new(q.peak, q.xi, q.nominal)?, tol)?;
            branch = Some(d.branch);
            let mi = if q.with_mi { Some(mutual_information(&d)?) } else { None };
            (report_peak_avg(&d, &q.ub)?, mi)
        }
        Scenario::AvgOnly => {
            let d = solve_mn(q.params, AvgOnlyConstraints::new(q.xi, q.nominal)?, tol)?;
            let mi = if q.with_mi { Some(mutual_information(&d)?) } else { None };
            (report_avg_only(&d, q.ub.beta)?, mi)
        }
        Scenario::Awgn => return Err(CliError::Usage("bounds supports peak-avg and avg-only".into())),
    };
    Ok(BoundsOutput { query: *q, report, branch, mi })
}

impl BoundsOutput {
    pub fn to_json(&self) -> serde_json::Value {
        let q = &self.query;
        let mut inputs = json!({
            "scenario": q.scenario.to_string(),
            "sigma2": q.params.sigma2,
            "varsigma2": q.params.varsigma2,
            "xi": q.xi,
            "P": q.nominal,
            "beta": q.ub.beta,
        });
        if q.scenario == Scenario::PeakAvg {
            inputs["A"] = json!(q.peak);
            inputs["delta"] = json!(q.ub.delta);
        }
        let mut v = json!({ "inputs": inputs, "report": self.report });
        if let Some(b) = self.branch {
            v["branch"] = json!(output::branch_name(b));
        }
        if let Some(mi) = &self.mi {
            v["mutual_information"] = json!(mi);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let q = &self.query;
        let r = &self.report;
        let mut lines: Vec<(String, String)> = vec![
            ("scenario".into(), q.scenario.to_string()),
            ("sigma2".into(), q.params.sigma2.to_string()),
            ("varsigma2".into(), q.params.varsigma2.to_string()),
            ("xi".into(), q.xi.to_string()),
        ];
        if q.scenario == Scenario::PeakAvg {
            lines.push(("A".into(), output::fmt_num(Some(q.peak))));
        }
        lines.push(("P".into(), output::fmt_num(Some(q.nominal))));
        if let Some(b) = self.branch {
            lines.push(("branch".into(), output::branch_name(b).into()));
        }
        for (k, v) in [
            ("c_low", r.c_low),
            ("c_upp", r.c_upp),
            ("gap", r.gap),
            ("gap_closed_form", r.gap_closed_form),
            ("asymptotic_gap", r.asymptotic_gap),
        ] {
            lines.push((k.into(), output::fmt_num(Some(v))));
        }
        for (k, v) in &r.aux {
            lines.push((k.clone(), output::fmt_num(Some(*v))));
        }
        if let Some(mi) = &self.mi {
            lines.push(("mi".into(), output::fmt_num(Some(mi.mi))));
            lines.push(("mi_error".into(), output::fmt_num(Some(mi.quadrature_error))));
        }
        let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut s: String = lines.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect();
        s.push_str(&format!("(nats per channel use; {})\n", r.validity));
        s
    }
}
