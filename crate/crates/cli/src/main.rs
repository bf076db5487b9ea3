use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vlc_capacity::bounds::UpperBoundParams;
use vlc_capacity::ChannelParams;
use vlc_capacity_cli::config::{parse_config_text, parse_oracles, split_assignment};
use vlc_capacity_cli::sweep::intensity;
use vlc_capacity_cli::{
    apply_overrides, evaluate_bounds, preset, run_curves, write_sweep, BoundsQuery, CliError, Scenario,
};

#[derive(Parser)]
#[command(
    name = "vlc-capacity",
    version,
    about = "Capacity bounds for optical-intensity channels with signal-dependent noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    PeakAvg,
    AvgOnly,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a preset sweep and write CSV.
    Sweep {
        /// fig2 ... fig8
        #[arg(long)]
        preset: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated numerical oracles: mi, monte_carlo.
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Flat key=value file applied to every curve before --set.
        #[arg(long)]
        config: Option<PathBuf>,
        /// key=value override applied to every curve; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Print the bounds at a single operating point.
    Bounds {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        /// Peak intensity in dB (peak-avg).
        #[arg(long = "A-dB", allow_hyphen_values = true)]
        a_db: Option<f64>,
        /// Nominal intensity in dB; defaults to the peak for peak-avg.
        #[arg(long = "P-dB", allow_hyphen_values = true)]
        p_db: Option<f64>,
        /// Peak-to-nominal ratio, used when --P-dB is absent.
        #[arg(long = "A-over-P")]
        a_over_p: Option<f64>,
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        varsigma2: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
        #[arg(long, default_value_t = 1e-3)]
        beta: f64,
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        /// Also compute the mutual information by quadrature.
        #[arg(long)]
        mi: bool,
        #[arg(long)]
        json: bool,
    },
}

fn sweep(
    name: &str,
    out: Option<PathBuf>,
    oracle: Option<String>,
    seed: Option<u64>,
    config: Option<PathBuf>,
    set: Vec<String>,
) -> Result<(), CliError> {
    let mut p = preset(name)?;
    let mut settings = Vec::new();
    if let Some(path) = config {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        settings.extend(parse_config_text(&text)?);
    }
    if let Some(o) = oracle {
        parse_oracles(&o)?;
        settings.push(("oracle".into(), o));
    }
    if let Some(s) = seed {
        settings.push(("seed".into(), s.to_string()));
    }
    for s in &set {
        let (k, v) = split_assignment(s)?;
        settings.push((k.into(), v.into()));
    }
    apply_overrides(&mut p, &settings)?;
    let results = run_curves(&p.curves)?;
    let failures: usize = results.iter().flatten().filter(|r| r.error.is_some()).count();
    match out {
        Some(path) => write_sweep(&p, &results, BufWriter::new(File::create(path)?))?,
        None => write_sweep(&p, &results, io::stdout().lock())?,
    }
    if failures > 0 {
        eprintln!("warning: {failures} grid point(s) could not be evaluated; see the error column");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bounds(
    scenario: ScenarioArg,
    a_db: Option<f64>,
    p_db: Option<f64>,
    a_over_p: Option<f64>,
    xi: f64,
    varsigma2: f64,
    sigma2: f64,
    beta: f64,
    delta: f64,
    mi: bool,
    json: bool,
) -> Result<(), CliError> {
    let params = ChannelParams::new(sigma2, varsigma2)?;
    let (scenario, peak, nominal) = match scenario {
        ScenarioArg::PeakAvg => {
            let a_db = a_db.ok_or_else(|| CliError::Usage("peak-avg needs --A-dB".into()))?;
            let peak = intensity(a_db, sigma2);
            let nominal = match (p_db, a_over_p) {
                (Some(_), Some(_)) => return Err(CliError::Usage("give --P-dB or --A-over-P, not both".into())),
                (Some(p), None) => intensity(p, sigma2),
                (None, Some(r)) => peak / r,
                (None, None) => peak,
            };
            (Scenario::PeakAvg, peak, nominal)
        }
        ScenarioArg::AvgOnly => {
            if a_db.is_some() || a_over_p.is_some() {
                return Err(CliError::Usage("avg-only takes --P-dB only".into()));
            }
            let p = p_db.ok_or_else(|| CliError::Usage("avg-only needs --P-dB".into()))?;
            (Scenario::AvgOnly, f64::INFINITY, intensity(p, sigma2))
        }
    };
    let ub = UpperBoundParams::new(beta, delta)?;
    let q = BoundsQuery { scenario, params, xi, peak, nominal, ub, with_mi: mi };
    let out = evaluate_bounds(&q)?;
    let mut stdout = io::stdout().lock();
    if json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&out.to_json()).expect("serializable report"))?;
    } else {
        write!(stdout, "{}", out.to_text())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep { preset, out, oracle, seed, config, set } => sweep(&preset, out, oracle, seed, config, set),
        Command::Bounds { scenario, a_db, p_db, a_over_p, xi, varsigma2, sigma2, beta, delta, mi, json } => {
            bounds(scenario, a_db, p_db, a_over_p, xi, varsigma2, sigma2, beta, delta, mi, json)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
