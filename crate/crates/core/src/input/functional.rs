use std::cell::Cell;

use super::{decade_breaks, ChannelParams, InputDistribution};
use crate::error::{domain, Error, Result};
use crate::numerics::Quadrature;

/// Largest normalization or mean defect accepted by [`j_functional`].
pub const FEASIBILITY_TOL: f64 = 1e-4;

const REL_TOL: f64 = 1e-12;

/// `J[f] = int f ln f + 1/2 int ln(1 + varsigma2 x) f` for a candidate density
/// on the support of `dist`, with the same mean requirement.
pub fn j_functional(dist: &dyn InputDistribution, pdf: &dyn Fn(f64) -> f64) -> Result<f64> {
    let end = dist.support_end();
    let mut points = decade_breaks(dist.params().varsigma2, dist.effective_end());
    if end.is_infinite() {
        points.push(f64::INFINITY);
    }
    j_functional_with(dist.params(), dist.average(), &points, pdf)
}

/// [`j_functional`] over an explicit support given as break points; the
/// first point must be 0 and the last is the support end (possibly infinite).
///
/// The candidate is checked first: it must be nonnegative, integrate to one
/// and have mean `average`, each within [`FEASIBILITY_TOL`].
pub fn j_functional_with(params: ChannelParams, average: f64, points: &[f64], pdf: &dyn Fn(f64) -> f64) -> Result<f64> {
    params.validate()?;
    if points.first() != Some(&0.0) || points.len() < 2 {
        return Err(domain("support must start at 0 and have an end point"));
    }
    let scale = if points.last().unwrap().is_infinite() { average.max(f64::MIN_POSITIVE) } else { 1.0 };
    let quad = Quadrature::new().rel_tol(REL_TOL).scale(scale);
    let negative = Cell::new(None);
    let f = |x: f64| {
        let v = pdf(x);
        if v < 0.0 && negative.get().is_none() {
            negative.set(Some((x, v)));
        }
        v.max(0.0)
    };

    let mass = quad.integrate_with_breaks(f, points)?.value;
    let mean = quad.integrate_with_breaks(|x| x * f(x), points)?.value;
    if let Some((x, v)) = negative.get() {
        return Err(Error::Infeasible(format!("density is negative at x = {x}: {v}")));
    }
    if (mass - 1.0).abs() > FEASIBILITY_TOL {
        return Err(Error::Infeasible(format!("density integrates to {mass}")));
    }
    if (mean - average).abs() > FEASIBILITY_TOL * average.max(1.0) {
        return Err(Error::Infeasible(format!("density has mean {mean}, required {average}")));
    }

    let vs2 = params.varsigma2;
    let r = quad.integrate_with_breaks(
        |x| {
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * (v.ln() + 0.5 * (vs2 * x).ln_1p())
            }
        },
        points,
    )?;
    Ok(r.value)
}
