use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::InputDistribution;
use crate::error::{domain, Result};
use crate::numerics::RootFinder;

/// Number of evenly spaced probability levels in an [`InverseCdfTable`].
pub const TABLE_NODES: usize = 4096;

/// Piecewise cubic Hermite approximation of the quantile function `x(F)`.
///
/// Node abscissas are found by root finding on the CDF; node slopes are
/// `1 / pdf(x)`, limited per interval so each cubic stays monotone.
#[derive(Debug, Clone)]
pub struct InverseCdfTable {
    levels: Vec<f64>,
    points: Vec<f64>,
    slopes: Vec<f64>,
}

impl InverseCdfTable {
    pub fn new(dist: &dyn InputDistribution) -> Result<Self> {
        let end = dist.effective_end();
        let bounded = dist.support_end().is_finite();
        let top = if bounded { 1.0 } else { dist.cdf(end) };
        let mut levels: Vec<f64> = (0..TABLE_NODES).map(|i| i as f64 / (TABLE_NODES - 1) as f64).collect();
        levels.pop();
        if !bounded {
            // resolve the unbounded tail geometrically
            for k in 4..12 {
                let f = 1.0 - 10f64.powi(-k);
                if f > *levels.last().unwrap() && f < top {
                    levels.push(f);
                }
            }
        }
        levels.push(top);

        let finder = RootFinder::new().tol(1e-15);
        let mut points = Vec::with_capacity(levels.len());
        points.push(0.0);
        let mut prev = 0.0;
        for &f in &levels[1..levels.len() - 1] {
            let x = finder.solve(|x| dist.cdf(x) - f, prev, end)?.root;
            points.push(x);
            prev = x;
        }
        points.push(end);
        if points.iter().any(|x| !x.is_finite()) {
            return Err(domain("quantile table has non-finite nodes"));
        }
        let slopes = points.iter().map(|&x| 1.0 / dist.pdf(x)).collect();
        Ok(Self { levels, points, slopes })
    }

    /// Approximate quantile at probability `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let top = *self.levels.last().unwrap();
        if u <= 0.0 {
            return self.points[0];
        }
        if u >= top {
            return *self.points.last().unwrap();
        }
        let i = self.levels.partition_point(|&l| l <= u) - 1;
        let (f0, f1) = (self.levels[i], self.levels[i + 1]);
        let (x0, x1) = (self.points[i], self.points[i + 1]);
        let h = f1 - f0;
        let secant = (x1 - x0) / h;
        let (mut m0, mut m1) = (self.slopes[i], self.slopes[i + 1]);
        if secant == 0.0 {
            return x0;
        }
        let (a, b) = (m0 / secant, m1 / secant);
        let r = a.hypot(b);
        if !r.is_finite() {
            m0 = if a.is_finite() { m0.min(3.0 * secant) } else { 3.0 * secant };
            m1 = if b.is_finite() { m1.min(3.0 * secant) } else { 3.0 * secant };
        } else if r > 3.0 {
            let tau = 3.0 / r;
            m0 *= tau;
            m1 *= tau;
        }
        let t = (u - f0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let x = (2.0 * t3 - 3.0 * t2 + 1.0) * x0
            + (t3 - 2.0 * t2 + t) * h * m0
            + (-2.0 * t3 + 3.0 * t2) * x1
            + (t3 - t2) * h * m1;
        x.clamp(x0, x1)
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.quantile(rng.random::<f64>())).collect()
    }
}

/// Draws `n` inputs from `dist` with a seeded ChaCha8 stream.
pub fn sample(dist: &dyn InputDistribution, n: usize, seed: u64) -> Result<Vec<f64>> {
    let table = InverseCdfTable::new(dist)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(table.draw(&mut rng, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::{solve_b, solve_mn, AvgOnlyConstraints, ChannelParams, PeakAvgConstraints};

    #[test]
    fn quantiles_invert_cdf() {
        let p = ChannelParams::new(1.0, 1.5).unwrap();
        let d = solve_b(p, PeakAvgConstraints::new(100.0, 1.0, 20.0).unwrap(), 1e-12).unwrap();
        let t = InverseCdfTable::new(&d).unwrap();
        for k in 1..50 {
            let u = k as f64 / 50.0 + 1e-4;
            assert!((d.cdf(t.quantile(u)) - u).abs() < 1e-7, "{u}");
        }
    }

    #[test]
    fn sample_mean_unbounded() {
        let p = ChannelParams::new(1.0, 1.5).unwrap();
        let d = solve_mn(p, AvgOnlyConstraints::new(0.5, 20.0).unwrap(), 1e-12).unwrap();
        let xs = sample(&d, 200_000, 7).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 10.0).abs() < 0.15, "{mean}");
        assert_eq!(xs, sample(&d, 200_000, 7).unwrap());
    }
}
