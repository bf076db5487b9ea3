//! CSV emission.

use std::io::Write;

use vlc_capacity::Branch;

use crate::config::{Oracles, Scenario, SweepConfig, SweepVar};
use crate::presets::Preset;
use crate::sweep::{SolverInfo, SweepRow};
use crate::CliError;

/// Formats with 12 significant digits, trailing zeros trimmed; empty for missing values.
pub fn fmt_num(x: Option<f64>) -> String {
    let Some(x) = x else { return String::new() };
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

pub fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::ZeroB => "zero_b",
        Branch::NonzeroB => "nonzero_b",
    }
}

/// Column names for a block of rows.
pub fn header(scenario: Scenario, sweep_var: SweepVar, oracles: Oracles) -> Vec<String> {
    let mut h = vec![sweep_var.column().to_string()];
    match scenario {
        Scenario::Awgn => h.extend(["capacity", "snr"].map(String::from)),
        Scenario::PeakAvg | Scenario::AvgOnly => {
            h.extend(["c_low", "c_upp", "gap", "asymptotic_gap"].map(String::from));
            if scenario == Scenario::PeakAvg {
                h.extend(["b", "branch"].map(String::from));
            } else {
                h.extend(["m", "n"].map(String::from));
            }
            if oracles.mi {
                h.extend(["mi", "mi_error"].map(String::from));
            }
            if oracles.monte_carlo {
                h.extend(["mi_mc", "mi_mc_std_error"].map(String::from));
            }
        }
    }
    h.push("error".into());
    h
}

fn record(row: &SweepRow, scenario: Scenario, oracles: Oracles) -> Vec<String> {
    let mut r = vec![fmt_num(Some(row.value))];
    match scenario {
        Scenario::Awgn => {
            let snr = match row.solver {
                Some(SolverInfo::Awgn { snr }) => Some(snr),
                _ => None,
            };
            r.push(fmt_num(row.c_low));
            r.push(fmt_num(snr));
        }
        _ => {
            for v in [row.c_low, row.c_upp, row.gap, row.asymptotic_gap] {
                r.push(fmt_num(v));
            }
            match (&row.solver, scenario) {
                (Some(SolverInfo::PeakAvg { b, branch }), _) => {
                    r.push(fmt_num(Some(*b)));
                    r.push(branch_name(*branch).into());
                }
                (Some(SolverInfo::AvgOnly { m, n }), _) => {
                    r.push(fmt_num(Some(*m)));
                    r.push(fmt_num(Some(*n)));
                }
                _ => r.extend([String::new(), String::new()]),
            }
            if oracles.mi {
                r.push(fmt_num(row.mi));
                r.push(fmt_num(row.mi_error));
            }
            if oracles.monte_carlo {
                r.push(fmt_num(row.mc_mi));
                r.push(fmt_num(row.mc_std_error));
            }
        }
    }
    r.push(row.error.clone().unwrap_or_default());
    r
}

/// Writes a header row followed by one record per row.
pub fn emit_csv<W: Write>(
    rows: &[SweepRow],
    scenario: Scenario,
    sweep_var: SweepVar,
    oracles: Oracles,
    dest: W,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(dest);
    w.write_record(header(scenario, sweep_var, oracles))?;
    for row in rows {
        w.write_record(record(row, scenario, oracles))?;
    }
    w.flush()?;
    Ok(())
}

fn describe(c: &SweepConfig) -> String {
    let f = &c.fixed;
    let mut parts = vec![format!("scenario={}", c.scenario), format!("sigma2={}", f.sigma2)];
    if c.sweep_var != SweepVar::Xi {
        parts.push(format!("xi={}", f.xi));
    }
    if c.sweep_var != SweepVar::Varsigma2 && c.scenario != Scenario::Awgn {
        parts.push(format!("varsigma2={}", f.varsigma2));
    }
    if c.scenario == Scenario::PeakAvg {
        parts.push(format!("A_over_P={}", f.a_over_p));
        if !matches!(c.sweep_var, SweepVar::ADb | SweepVar::PDb) {
            parts.push(format!("A_dB={}", f.a_db));
        }
        parts.push(format!("delta={}", f.delta));
    } else if c.sweep_var != SweepVar::PDb {
        parts.push(format!("P_dB={}", f.p_db));
    }
    if c.scenario != Scenario::Awgn {
        parts.push(format!("beta={}", f.beta));
    }
    if c.oracles.monte_carlo {
        parts.push(format!("seed={}", c.seed));
        parts.push(format!("mc_samples={}", c.mc_samples));
    }
    parts.join(" ")
}

/// Writes a full sweep: a `#` comment preamble, then per curve a
/// `# series` comment line and a CSV block with its own header.
pub fn write_sweep<W: Write>(preset: &Preset, results: &[Vec<SweepRow>], mut dest: W) -> Result<(), CliError> {
    writeln!(dest, "# vlc-capacity sweep {}: {}", preset.name, preset.title)?;
    writeln!(dest, "# units: nats per channel use; intensities in dB are 10 log10(X / sigma)")?;
    for n in &preset.notes {
        writeln!(dest, "# {n}")?;
    }
    for (c, rows) in preset.curves.iter().zip(results) {
        writeln!(dest, "# series {} {}", c.label, describe(c))?;
        emit_csv(rows, c.scenario, c.sweep_var, c.oracles, &mut dest)?;
    }
    dest.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(Some(20.0)), "20");
        assert_eq!(fmt_num(Some(1.0 / 3.0)), "0.333333333333");
        assert_eq!(fmt_num(Some(-2.5e-9)), "-2.50000000000e-9");
        assert_eq!(fmt_num(Some(123456.7890123456)), "123456.789012");
        assert_eq!(fmt_num(None), "");
    }

    #[test]
    fn empty_rows_give_header_only() {
        let mut buf = Vec::new();
        emit_csv(&[], Scenario::PeakAvg, SweepVar::ADb, Oracles::default(), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "A_dB,c_low,c_upp,gap,asymptotic_gap,b,branch,error\n");
    }
}
