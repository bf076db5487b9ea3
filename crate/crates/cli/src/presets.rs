//! Built-in sweeps for the standard capacity-bound figures. All use
//! `sigma2 = 1` and `beta = delta = 0.001`.

use crate::config::{parse_grid, Scenario, SweepConfig, SweepVar};
use crate::CliError;

pub const PRESET_NAMES: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

/// A named family of curves written to one CSV file.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub title: String,
    pub notes: Vec<String>,
    pub curves: Vec<SweepConfig>,
}

fn grid(s: &str) -> Vec<f64> {
    parse_grid(s).expect("built-in grid")
}

fn curve(
    label: String,
    scenario: Scenario,
    var: SweepVar,
    g: &str,
    tweak: impl FnOnce(&mut SweepConfig),
) -> SweepConfig {
    let mut c = SweepConfig::new(label, scenario, var, grid(g));
    tweak(&mut c);
    c
}

pub fn preset(name: &str) -> Result<Preset, CliError> {
    let intensity = "20:2.5:70";
    let p = match name {
        "fig2" => Preset {
            name: name.into(),
            title: "peak and average constraints: bounds versus A for several A/P".into(),
            notes: vec!["xi = 0.3, varsigma2 = 1.5".into()],
            curves: [0.5, 1.5, 3.0]
                .iter()
                .map(|&r| {
                    curve(format!("A_over_P={r}"), Scenario::PeakAvg, SweepVar::ADb, intensity, |c| {
                        c.fixed.a_over_p = r;
                    })
                })
                .collect(),
        },
        "fig3" => Preset {
            name: name.into(),
            title: "peak and average constraints: bounds versus xi for several A/P".into(),
            notes: vec![
                "A = 45 dB, varsigma2 = 1.5".into(),
                "A/P values chosen so the average-to-peak ratio stays below the untilted optimum".into(),
            ],
            curves: [3.0, 4.0, 5.0]
                .iter()
                .map(|&r| {
                    curve(format!("A_over_P={r}"), Scenario::PeakAvg, SweepVar::Xi, "0.05:0.05:1.0", |c| {
                        c.fixed.a_over_p = r;
                        c.fixed.a_db = 45.0;
                    })
                })
                .collect(),
        },
        "fig4" => Preset {
            name: name.into(),
            title: "peak and average constraints: bounds versus A for several varsigma2".into(),
            notes: vec!["xi = 0.3, A = 1.5 P; varsigma2 = 0 is the signal-independent limit".into()],
            curves: [0.0, 1.0, 2.0, 4.0]
                .iter()
                .map(|&v| {
                    curve(format!("varsigma2={v}"), Scenario::PeakAvg, SweepVar::ADb, intensity, |c| {
                        c.fixed.varsigma2 = v;
                    })
                })
                .collect(),
        },
        "fig5" => Preset {
            name: name.into(),
            title: "average constraint only: bounds versus P for several xi".into(),
            notes: vec!["varsigma2 = 1.5".into()],
            curves: [0.2, 0.5, 0.8]
                .iter()
                .map(|&xi| {
                    curve(format!("xi={xi}"), Scenario::AvgOnly, SweepVar::PDb, intensity, |c| {
                        c.fixed.xi = xi;
                    })
                })
                .collect(),
        },
        "fig6" => Preset {
            name: name.into(),
            title: "average constraint only: bounds versus varsigma2 for several P".into(),
            notes: vec!["xi = 0.3".into()],
            curves: [30.0, 40.0, 50.0]
                .iter()
                .map(|&p| {
                    curve(format!("P_dB={p}"), Scenario::AvgOnly, SweepVar::Varsigma2, "0:0.5:10", |c| {
                        c.fixed.p_db = p;
                    })
                })
                .collect(),
        },
        "fig7" => Preset {
            name: name.into(),
            title: "bounds versus P with and without a peak constraint, AWGN reference".into(),
            notes: vec![
                "xi = 0.3, varsigma2 = 1.5, A = 1.5 P for the peak-constrained curve".into(),
                "AWGN reference uses snr = P^2 / sigma2".into(),
                "comparison bounds from other work are not reproduced".into(),
            ],
            curves: vec![
                curve("peak-avg".into(), Scenario::PeakAvg, SweepVar::PDb, intensity, |_| {}),
                curve("avg-only".into(), Scenario::AvgOnly, SweepVar::PDb, intensity, |_| {}),
                curve("awgn".into(), Scenario::Awgn, SweepVar::PDb, intensity, |_| {}),
            ],
        },
        "fig8" => Preset {
            name: name.into(),
            title: "bounds versus xi with and without a peak constraint, AWGN reference".into(),
            notes: vec![
                "A = P = 45 dB, varsigma2 = 1.5".into(),
                "AWGN reference uses snr = P^2 / sigma2".into(),
                "comparison bounds from other work are not reproduced".into(),
            ],
            curves: ["peak-avg", "avg-only", "awgn"]
                .iter()
                .map(|&s| {
                    curve(s.into(), s.parse().unwrap(), SweepVar::Xi, "0.05:0.05:0.95", |c| {
                        c.fixed.a_over_p = 1.0;
                        c.fixed.a_db = 45.0;
                        c.fixed.p_db = 45.0;
                    })
                })
                .collect(),
        },
        other => {
            return Err(CliError::Usage(format!(
                "unknown preset `{other}` (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(p)
}
