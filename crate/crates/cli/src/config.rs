//! Sweep configuration: one curve per [`SweepConfig`], built from presets,
//! flat `key=value` files and command-line overrides.

use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    PeakAvg,
    AvgOnly,
    /// Reference AWGN capacity `1/2 ln(1 + P^2 / sigma2)`.
    Awgn,
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "peak-avg" | "peak_avg" => Ok(Self::PeakAvg),
            "avg-only" | "avg_only" => Ok(Self::AvgOnly),
            "awgn" => Ok(Self::Awgn),
            _ => Err(CliError::Usage(format!("unknown scenario `{s}` (peak-avg, avg-only, awgn)"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PeakAvg => "peak-avg",
            Self::AvgOnly => "avg-only",
            Self::Awgn => "awgn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    ADb,
    PDb,
    Xi,
    Varsigma2,
}

impl SweepVar {
    /// Column name in CSV output.
    pub fn column(&self) -> &'static str {
        match self {
            Self::ADb => "A_dB",
            Self::PDb => "P_dB",
            Self::Xi => "xi",
            Self::Varsigma2 => "varsigma2",
        }
    }
}

impl FromStr for SweepVar {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "A_dB" | "a_db" => Ok(Self::ADb),
            "P_dB" | "p_db" => Ok(Self::PDb),
            "xi" => Ok(Self::Xi),
            "varsigma2" => Ok(Self::Varsigma2),
            _ => Err(CliError::Usage(format!("unknown sweep variable `{s}` (A_dB, P_dB, xi, varsigma2)"))),
        }
    }
}

/// Parameters held fixed along a sweep. Whichever one is swept is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed {
    pub xi: f64,
    pub varsigma2: f64,
    pub sigma2: f64,
    /// Peak-to-nominal ratio `A / P`.
    pub a_over_p: f64,
    pub a_db: f64,
    pub p_db: f64,
    pub beta: f64,
    pub delta: f64,
}

impl Default for Fixed {
    fn default() -> Self {
        Self { xi: 0.3, varsigma2: 1.5, sigma2: 1.0, a_over_p: 1.5, a_db: 45.0, p_db: 45.0, beta: 1e-3, delta: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Oracles {
    pub mi: bool,
    pub monte_carlo: bool,
}

/// One curve of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub label: String,
    pub scenario: Scenario,
    pub sweep_var: SweepVar,
    pub grid: Vec<f64>,
    pub fixed: Fixed,
    pub oracles: Oracles,
    pub seed: u64,
    pub mc_samples: usize,
}

impl SweepConfig {
    pub fn new(label: impl Into<String>, scenario: Scenario, sweep_var: SweepVar, grid: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            scenario,
            sweep_var,
            grid,
            fixed: Fixed::default(),
            oracles: Oracles::default(),
            seed: 1,
            mc_samples: 20_000,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.is_empty() {
            return Err(CliError::Usage(format!("{}: grid is empty", self.label)));
        }
        if self.grid.iter().any(|v| !v.is_finite()) || self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Usage(format!("{}: grid must be finite and strictly increasing", self.label)));
        }
        let f = &self.fixed;
        if !(f.sigma2 > 0.0) || !(f.varsigma2 >= 0.0) || !(f.a_over_p > 0.0) {
            return Err(CliError::Usage(format!(
                "{}: sigma2 and A_over_P must be positive, varsigma2 nonnegative",
                self.label
            )));
        }
        if !(f.xi > 0.0 && f.xi <= 1.0) {
            return Err(CliError::Usage(format!("{}: xi must lie in (0, 1]", self.label)));
        }
        if !(0.0..0.5).contains(&f.beta) || !(f.delta >= 0.0) {
            return Err(CliError::Usage(format!("{}: need 0 <= beta < 0.5 and delta >= 0", self.label)));
        }
        if self.oracles.monte_carlo && self.mc_samples < 2 {
            return Err(CliError::Usage(format!("{}: mc_samples must be at least 2", self.label)));
        }
        Ok(())
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let num = || -> Result<f64, CliError> {
            value.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("`{key}` expects a number, got `{value}`")))
        };
        match key.trim() {
            "label" => self.label = value.trim().to_string(),
            "scenario" => self.scenario = value.trim().parse()?,
            "sweep" => self.sweep_var = value.trim().parse()?,
            "grid" => self.grid = parse_grid(value)?,
            "xi" => self.fixed.xi = num()?,
            "varsigma2" => self.fixed.varsigma2 = num()?,
            "sigma2" => self.fixed.sigma2 = num()?,
            "A_over_P" | "a_over_p" => self.fixed.a_over_p = num()?,
            "A_dB" | "a_db" => self.fixed.a_db = num()?,
            "P_dB" | "p_db" => self.fixed.p_db = num()?,
            "beta" => self.fixed.beta = num()?,
            "delta" => self.fixed.delta = num()?,
            "seed" => {
                self.seed = value.trim().parse().map_err(|_| CliError::Usage(format!("bad seed `{value}`")))?;
            }
            "mc_samples" => {
                self.mc_samples =
                    value.trim().parse().map_err(|_| CliError::Usage(format!("bad mc_samples `{value}`")))?;
            }
            "oracle" => self.oracles = parse_oracles(value)?,
            other => return Err(CliError::Usage(format!("unknown setting `{other}`"))),
        }
        Ok(())
    }
}

/// Splits `key=value`.
pub fn split_assignment(s: &str) -> Result<(&str, &str), CliError> {
    s.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{s}`")))
}

/// Parses a flat `key=value` file; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = split_assignment(line).map_err(|e| CliError::Usage(format!("line {}: {e}", i + 1)))?;
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// `a,b,c` or `start:step:stop` (inclusive of `stop` up to rounding).
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse grid `{s}`"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if parts.len() == 3 {
        let nums: Vec<f64> = parts.iter().map(|p| p.parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let (start, step, stop) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| start + step * i as f64).collect());
    }
    if parts.len() != 1 {
        return Err(bad());
    }
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect()
}

pub fn parse_oracles(s: &str) -> Result<Oracles, CliError> {
    let mut o = Oracles::default();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match item {
            "mi" => o.mi = true,
            "monte_carlo" | "monte-carlo" | "mc" => o.monte_carlo = true,
            "none" => {}
            other => return Err(CliError::Usage(format!("unknown oracle `{other}` (mi, monte_carlo)"))),
        }
    }
    Ok(o)
}
