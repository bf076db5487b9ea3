use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::{DEFAULT_MAX_EVALS, DEFAULT_REL_TOL};
use crate::error::{domain, Error, Result};

// 21-point Kronrod extension of the 10-point Gauss-Legendre rule.
// Nodes are listed from the outside in; odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_083_180,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
}

/// Adaptive Gauss-Kronrod (10/21) integrator with global interval bisection.
///
/// Semi-infinite and infinite ranges are mapped onto `[0, 1)` with
/// `x = lo + scale * t / (1 - t)` (mirrored for a lower infinite end), so
/// `scale` should be of the order of the decay length of the integrand.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    rel_tol: f64,
    abs_tol: f64,
    max_evals: usize,
    scale: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { rel_tol: DEFAULT_REL_TOL, abs_tol: 0.0, max_evals: DEFAULT_MAX_EVALS, scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    Upper { lo: f64, scale: f64 },
    Lower { hi: f64, scale: f64 },
}

impl Map {
    #[inline]
    fn eval<F: Fn(f64) -> f64>(&self, f: &F, t: f64) -> f64 {
        match *self {
            Map::Identity => f(t),
            Map::Upper { lo, scale } => {
                let u = 1.0 - t;
                let v = f(lo + scale * t / u);
                if v == 0.0 {
                    0.0
                } else {
                    v * scale / (u * u)
                }
            }
            Map::Lower { hi, scale } => {
                let u = 1.0 - t;
                let v = f(hi - scale * t / u);
                if v == 0.0 {
                    0.0
                } else {
                    v * scale / (u * u)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    resabs: f64,
    map: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

impl Quadrature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }

    /// Length scale used by the semi-infinite substitution.
    pub fn scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// Integrates `f` over `[lo, hi]`; either end may be infinite.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<QuadratureResult> {
        self.integrate_with_breaks(f, &[lo, hi])
    }

    /// Integrates over consecutive segments `points[i]..points[i+1]`.
    ///
    /// Break points let the caller seed the bisection at known features
    /// (kinks, support ends, peaks). Only the first and last point may be
    /// infinite.
    pub fn integrate_with_breaks<F: Fn(f64) -> f64>(&self, f: F, points: &[f64]) -> Result<QuadratureResult> {
        if points.len() < 2 {
            return Err(domain("integration needs at least two points"));
        }
        if points.iter().any(|p| p.is_nan()) {
            return Err(domain("integration limit is NaN"));
        }
        if points.windows(2).any(|w| w[0] > w[1]) {
            return Err(domain(format!("integration limits must be nondecreasing: {points:?}")));
        }
        if points[1..points.len() - 1].iter().any(|p| p.is_infinite()) {
            return Err(domain("only the outer integration limits may be infinite"));
        }
        if !(self.scale > 0.0) {
            return Err(domain("substitution scale must be positive"));
        }

        let mut maps = Vec::new();
        let mut segments = Vec::new();
        for w in points.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if lo == hi {
                continue;
            }
            match (lo.is_infinite(), hi.is_infinite()) {
                (false, false) => {
                    maps.push(Map::Identity);
                    segments.push((lo, hi, maps.len() - 1));
                }
                (false, true) => {
                    maps.push(Map::Upper { lo, scale: self.scale });
                    segments.push((0.0, 1.0, maps.len() - 1));
                }
                (true, false) => {
                    maps.push(Map::Lower { hi, scale: self.scale });
                    segments.push((0.0, 1.0, maps.len() - 1));
                }
                (true, true) => {
                    maps.push(Map::Lower { hi: 0.0, scale: self.scale });
                    segments.push((0.0, 1.0, maps.len() - 1));
                    maps.push(Map::Upper { lo: 0.0, scale: self.scale });
                    segments.push((0.0, 1.0, maps.len() - 1));
                }
            }
        }
        if segments.is_empty() {
            return Ok(QuadratureResult { value: 0.0, est_error: 0.0, evaluations: 0 });
        }
        self.adapt(&f, &maps, &segments)
    }

    fn adapt<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        maps: &[Map],
        segments: &[(f64, f64, usize)],
    ) -> Result<QuadratureResult> {
        let mut evaluations = 0usize;
        let mut heap = BinaryHeap::new();
        let mut value = 0.0;
        let mut error = 0.0;
        let mut resabs = 0.0;
        for &(a, b, m) in segments {
            let p = gk21(f, maps[m], a, b, m)?;
            evaluations += 21;
            value += p.value;
            error += p.error;
            resabs += p.resabs;
            heap.push(p);
        }
        // error of panels too narrow to bisect further
        let mut frozen_value = 0.0;
        let mut frozen_error = 0.0;

        loop {
            let tol = self.abs_tol.max(self.rel_tol * value.abs());
            let roundoff = 50.0 * f64::EPSILON * resabs;
            if error <= tol || error <= roundoff {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * worst.a.abs().max(worst.b.abs()) {
                frozen_value += worst.value;
                frozen_error += worst.error;
                continue;
            }
            if evaluations + 42 > self.max_evals {
                heap.push(worst);
                let (v, e) = totals(&heap, frozen_value, frozen_error);
                return Err(Error::Convergence { estimate: v, est_error: e, evaluations });
            }
            let left = gk21(f, maps[worst.map], worst.a, mid, worst.map)?;
            let right = gk21(f, maps[worst.map], mid, worst.b, worst.map)?;
            evaluations += 42;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            resabs += left.resabs + right.resabs - worst.resabs;
            heap.push(left);
            heap.push(right);
        }

        let (value, est_error) = totals(&heap, frozen_value, frozen_error);
        let tol = self.abs_tol.max(self.rel_tol * value.abs());
        let roundoff = 50.0 * f64::EPSILON * resabs.abs();
        if est_error > tol && est_error > roundoff && frozen_error > 0.0 {
            return Err(Error::Convergence { estimate: value, est_error, evaluations });
        }
        Ok(QuadratureResult { value, est_error, evaluations })
    }
}

fn totals(heap: &BinaryHeap<Panel>, frozen_value: f64, frozen_error: f64) -> (f64, f64) {
    let mut v = frozen_value;
    let mut e = frozen_error;
    for p in heap.iter() {
        v += p.value;
        e += p.error;
    }
    (v, e)
}

fn gk21<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64, m: usize) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0; 21];
    for (i, &x) in XGK.iter().enumerate() {
        if i == 10 {
            fv[10] = map.eval(f, center);
        } else {
            fv[i] = map.eval(f, center - half * x);
            fv[20 - i] = map.eval(f, center + half * x);
        }
    }
    if let Some(bad) = fv.iter().position(|v| !v.is_finite()) {
        let x = if bad <= 10 { center - half * XGK[bad] } else { center + half * XGK[20 - bad] };
        return Err(domain(format!("integrand is not finite near t = {x}")));
    }
    let mut resk = WGK[10] * fv[10];
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fv[10].abs();
    for i in 0..10 {
        let pair = fv[i] + fv[20 - i];
        resk += WGK[i] * pair;
        resabs += WGK[i] * (fv[i].abs() + fv[20 - i].abs());
        if i % 2 == 1 {
            resg += WG[i / 2] * pair;
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fv[10] - mean).abs();
    for i in 0..10 {
        resasc += WGK[i] * ((fv[i] - mean).abs() + (fv[20 - i] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel { a, b, value, error, resabs, map: m })
}

/// Integrates `f` over `[lo, hi]` (either end may be infinite) to relative tolerance `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<QuadratureResult> {
    if !(lo < hi) {
        return Err(domain(format!("integrate requires lo < hi, got [{lo}, {hi}]")));
    }
    Quadrature::new().rel_tol(rel_tol).integrate(f, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_and_gauss_weights_integrate_monomials() {
        for k in (0..32).step_by(2) {
            let mut s = if k == 0 { WGK[10] } else { 0.0 };
            for i in 0..10 {
                s += 2.0 * WGK[i] * XGK[i].powi(k);
            }
            assert!((s - 2.0 / (k + 1) as f64).abs() < 1e-15, "kronrod degree {k}");
        }
        for k in (0..20).step_by(2) {
            let s: f64 = (0..5).map(|j| 2.0 * WG[j] * XGK[2 * j + 1].powi(k)).sum();
            assert!((s - 2.0 / (k + 1) as f64).abs() < 1e-15, "gauss degree {k}");
        }
    }

    #[test]
    fn simple_integrals() {
        let r = integrate(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert!(r.evaluations >= 1);
        let r = integrate(|x| (-x).exp(), 0.0, f64::INFINITY, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate(|_| 1.0, 1.0, 2.5f64.sqrt(), 1e-12).unwrap();
        assert!((r.value - 0.581_138_830_084_189_7).abs() < 1e-9);
    }

    #[test]
    fn whole_line_gaussian() {
        let r = Quadrature::new()
            .rel_tol(1e-12)
            .integrate(|x| (-0.5 * x * x).exp(), f64::NEG_INFINITY, f64::INFINITY)
            .unwrap();
        assert!((r.value - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-11);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let err = Quadrature::new()
            .rel_tol(1e-14)
            .max_evals(100)
            .integrate(|x| (50.0 * x).sin().abs(), 0.0, 10.0)
            .unwrap_err();
        match err {
            Error::Convergence { estimate, evaluations, .. } => {
                assert!(estimate.is_finite());
                assert!(evaluations <= 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reversed_limits_are_rejected() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-10).is_err());
    }
}
