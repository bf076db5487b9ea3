//! Browser bindings: input densities, bound curves and simulated channel
//! outputs, returned as flat `Float64Array`s for plotting on a canvas.

use wasm_bindgen::prelude::*;

use vlc_capacity::bounds::{report_avg_only, report_peak_avg, UpperBoundParams};
use vlc_capacity::channel::{output_marginal_pdf, transmit_each};
use vlc_capacity::input::{sample, solve_b, solve_mn, InputDistribution};
use vlc_capacity::{from_db, AvgOnlyConstraints, ChannelParams, PeakAvgConstraints};

const TOL: f64 = 1e-12;

fn solve(
    scenario: &str,
    db: f64,
    xi: f64,
    varsigma2: f64,
    a_over_p: f64,
) -> Result<Box<dyn InputDistribution>, String> {
    let params = ChannelParams::new(1.0, varsigma2).map_err(|e| e.to_string())?;
    let x = from_db(db);
    match scenario {
        "peak-avg" => {
            let cons = PeakAvgConstraints::new(x, xi, x / a_over_p).map_err(|e| e.to_string())?;
            Ok(Box::new(solve_b(params, cons, TOL).map_err(|e| e.to_string())?))
        }
        "avg-only" => {
            let cons = AvgOnlyConstraints::new(xi, x).map_err(|e| e.to_string())?;
            Ok(Box::new(solve_mn(params, cons, TOL).map_err(|e| e.to_string())?))
        }
        other => Err(format!("unknown scenario `{other}`")),
    }
}

/// `[x0, f0, x1, f1, ...]` over the (effective) support.
pub fn pdf_curve(
    scenario: &str,
    db: f64,
    xi: f64,
    varsigma2: f64,
    a_over_p: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let d = solve(scenario, db, xi, varsigma2, a_over_p)?;
    let end = d.effective_end();
    let n = points.max(2);
    Ok((0..n)
        .flat_map(|i| {
            let x = end * i as f64 / (n - 1) as f64;
            [x, d.pdf(x)]
        })
        .collect())
}

/// `[db, c_low, c_upp, ...]` with `db` spaced evenly over `[db_lo, db_hi]`.
pub fn bound_curve(
    scenario: &str,
    xi: f64,
    varsigma2: f64,
    a_over_p: f64,
    db_lo: f64,
    db_hi: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let n = points.max(2);
    let ub = UpperBoundParams::default();
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let db = db_lo + (db_hi - db_lo) * i as f64 / (n - 1) as f64;
        let params = ChannelParams::new(1.0, varsigma2).map_err(|e| e.to_string())?;
        let x = from_db(db);
        let rep = match scenario {
            "peak-avg" => {
                let cons = PeakAvgConstraints::new(x, xi, x / a_over_p).map_err(|e| e.to_string())?;
                report_peak_avg(&solve_b(params, cons, TOL).map_err(|e| e.to_string())?, &ub)
            }
            "avg-only" => {
                let cons = AvgOnlyConstraints::new(xi, x).map_err(|e| e.to_string())?;
                report_avg_only(&solve_mn(params, cons, TOL).map_err(|e| e.to_string())?, ub.beta)
            }
            other => return Err(format!("unknown scenario `{other}`")),
        }
        .map_err(|e| e.to_string())?;
        out.extend([db, rep.c_low, rep.c_upp]);
    }
    Ok(out)
}

/// Histogram of simulated outputs next to the marginal density:
/// `[y_center, histogram_density, f_Y(y_center), ...]`.
#[allow(clippy::too_many_arguments)]
pub fn output_histogram(
    scenario: &str,
    db: f64,
    xi: f64,
    varsigma2: f64,
    a_over_p: f64,
    samples: usize,
    bins: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    if samples == 0 || bins == 0 {
        return Err("samples and bins must be positive".into());
    }
    let d = solve(scenario, db, xi, varsigma2, a_over_p)?;
    let xs = sample(d.as_ref(), samples, seed).map_err(|e| e.to_string())?;
    let ys = transmit_each(&xs, &d.params(), seed ^ 0x5eed).map_err(|e| e.to_string())?;
    let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(f64::MIN_POSITIVE);
    let mut counts = vec![0usize; bins];
    for y in ys {
        let k = (((y - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let mut out = Vec::with_capacity(3 * bins);
    for (k, c) in counts.into_iter().enumerate() {
        let y = lo + (k as f64 + 0.5) * width;
        let f = output_marginal_pdf(y, d.as_ref()).map_err(|e| e.to_string())?;
        out.extend([y, c as f64 / (samples as f64 * width), f]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = pdfCurve)]
pub fn pdf_curve_js(
    scenario: &str,
    db: f64,
    xi: f64,
    varsigma2: f64,
    a_over_p: f64,
    points: usize,
) -> Result<Vec<f64>, JsValue> {
    pdf_curve(scenario, db, xi, varsigma2, a_over_p, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = boundCurve)]
pub fn bound_curve_js(
    scenario: &str,
    xi: f64,
    varsigma2: f64,
    a_over_p: f64,
    db_lo: f64,
    db_hi: f64,
    points: usize,
) -> Result<Vec<f64>, JsValue> {
    bound_curve(scenario, xi, varsigma2, a_over_p, db_lo, db_hi, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = outputHistogram)]
#[allow(clippy::too_many_arguments)]
pub fn output_histogram_js(
    scenario: &str,
    db: f64,
    xi: f64,
    varsigma2: f64,
    a_over_p: f64,
    samples: usize,
    bins: usize,
    seed: u64,
) -> Result<Vec<f64>, JsValue> {
    output_histogram(scenario, db, xi, varsigma2, a_over_p, samples, bins, seed).map_err(|e| JsValue::from_str(&e))
}
