use proptest::prelude::*;
use vlc_capacity::input::{alpha_star, solve_b, solve_mn, Branch, InputDistribution};
use vlc_capacity::numerics::Quadrature;
use vlc_capacity::{AvgOnlyConstraints, ChannelParams, PeakAvgConstraints};

fn peak_avg(vs2: f64, log_a: f64, alpha: f64) -> Option<vlc_capacity::input::PeakAvgInputDist> {
    let a = 10f64.powf(log_a);
    let p = ChannelParams::new(1.0, vs2).ok()?;
    solve_b(p, PeakAvgConstraints::new(a, alpha, a).ok()?, 1e-12).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tilt_sign_follows_alpha_star(vs2 in 0.0f64..8.0, log_a in 0.0f64..7.0, alpha in 0.02f64..0.98) {
        let a = 10f64.powf(log_a);
        let star = alpha_star(vs2, a).unwrap();
        prop_assume!((alpha - star).abs() > 1e-6);
        if let Some(d) = peak_avg(vs2, log_a, alpha) {
            prop_assert_eq!(d.branch, Branch::NonzeroB);
            prop_assert!((d.b > 0.0) == (alpha > star), "b {} alpha {} star {}", d.b, alpha, star);
        }
    }

    #[test]
    fn mean_increases_with_tilt(vs2 in 0.0f64..8.0, log_a in 0.0f64..6.0, lo in 0.05f64..0.9, step in 0.01f64..0.09) {
        let (d1, d2) = (peak_avg(vs2, log_a, lo), peak_avg(vs2, log_a, lo + step));
        if let (Some(d1), Some(d2)) = (d1, d2) {
            prop_assert!(d2.b > d1.b);
        }
    }

    #[test]
    fn peak_average_density_is_normalized(vs2 in 0.0f64..8.0, log_a in 0.0f64..6.0, alpha in 0.05f64..0.95) {
        if let Some(d) = peak_avg(vs2, log_a, alpha) {
            let a = d.support_end();
            let q = Quadrature::new().rel_tol(1e-10).scale(a);
            let mut pts = vec![0.0];
            let mut x = a * 1e-6;
            while x < a { pts.push(x); x *= 10.0; }
            pts.push(a);
            let mass = q.integrate_with_breaks(|x| d.pdf(x), &pts).unwrap().value;
            let mean = q.integrate_with_breaks(|x| x * d.pdf(x), &pts).unwrap().value;
            prop_assert!((mass - 1.0).abs() < 1e-7, "mass {}", mass);
            prop_assert!((mean / d.average() - 1.0).abs() < 1e-7, "mean {}", mean);
            prop_assert!((d.cdf(a) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn average_only_residuals_vanish(vs2 in 0.0f64..8.0, log_p in 0.0f64..7.0, xi in 0.05f64..1.0) {
        let p = ChannelParams::new(1.0, vs2).unwrap();
        let d = solve_mn(p, AvgOnlyConstraints::new(xi, 10f64.powf(log_p)).unwrap(), 1e-13).unwrap();
        let (norm, mean) = d.equation_residuals().unwrap();
        prop_assert!(norm.abs() < 1e-9 && mean.abs() < 1e-9, "{} {}", norm, mean);
        prop_assert!(d.n > 0.0);
    }
}
