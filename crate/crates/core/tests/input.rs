mod common;

use common::{rel_err, GaussLegendre};
use vlc_capacity::input::*;
use vlc_capacity::{from_db, AvgOnlyConstraints, ChannelParams, PeakAvgConstraints};

fn params(vs2: f64) -> ChannelParams {
    ChannelParams::new(1.0, vs2).unwrap()
}

/// `int_1^T e^{b (t^2 - 1) / vs2} dt` by Gauss-Legendre, scaled by `e^{-shift}`.
fn g_reference(b: f64, vs2: f64, a: f64, shift: f64) -> f64 {
    let gl = GaussLegendre::new(30);
    let t_end = (1.0 + vs2 * a).sqrt();
    let k = b / vs2;
    gl.integrate(|t| (k * (t * t - 1.0) - shift).exp(), 1.0, t_end, 400)
}

#[test]
fn g_negative_tilt_matches_reference_integral() {
    let gl_cases = [(-0.5, 1.5, 10.0), (-2e-3, 1.5, 1e3), (-1e-5, 0.5, 1e5), (-4.0, 5.0, 30.0)];
    for &(b, vs2, a) in &gl_cases {
        let g = g_factor(b, vs2, a).unwrap();
        let r = g_reference(b, vs2, a, 0.0);
        assert!(rel_err(g, r) < 1e-11, "{b} {vs2} {a}: {g} vs {r}");
    }
}

#[test]
fn big_g_extends_g() {
    let (b, vs2, a, delta) = (-0.5, 1.5, 10.0, 1e-3);
    // closed erf form at A (1 + delta)
    let closed = g_factor(b, vs2, a * (1.0 + delta)).unwrap();
    assert!(rel_err(big_g(b, vs2, a, delta).unwrap(), closed) < 1e-9);
    assert!(rel_err(big_g(b, vs2, a, 0.0).unwrap(), g_factor(b, vs2, a).unwrap()) < 1e-10);
    let flat = (1.0 + vs2 * a * (1.0 + delta)).sqrt() - 1.0;
    assert!(rel_err(big_g(1e-14, vs2, a, delta).unwrap(), flat) < 1e-10);
}

#[test]
fn ln_g_survives_overflow() {
    // b A = 2000 overflows e^{bA}; the scaled quadrature still works
    let (b, vs2, a) = (2.0, 1.5, 1000.0);
    let ln_g = ln_g_factor(b, vs2, a).unwrap();
    let r = g_reference(b, vs2, a, b * a);
    assert!(((ln_g - b * a) - r.ln()).abs() < 1e-10);
}

#[test]
fn normalization_and_mean_by_reference_quadrature() {
    let gl = GaussLegendre::new(30);
    for &vs2 in &[0.5, 1.5, 5.0] {
        for &db in &[30.0, 45.0] {
            let a = from_db(db);
            for &xi_p in &[0.2 * a, 0.6 * a] {
                let d = solve_b(params(vs2), PeakAvgConstraints::new(a, 1.0, xi_p).unwrap(), 1e-12).unwrap();
                let mass = gl.integrate_graded(|x| d.pdf(x), 0.0, a, 1e-2, 40);
                let mean = gl.integrate_graded(|x| x * d.pdf(x), 0.0, a, 1e-2, 40);
                assert!((mass - 1.0).abs() < 1e-9, "{vs2} {db} {xi_p}: {mass}");
                assert!(rel_err(mean, xi_p) < 1e-8, "{vs2} {db} {xi_p}: {mean}");
            }
        }
    }
}

#[test]
fn untilted_mean_is_alpha_star() {
    let gl = GaussLegendre::new(30);
    let (vs2, a) = (1.5, 10.0);
    let z = gl.integrate(|x| 1.0 / (1.0 + vs2 * x).sqrt(), 0.0, a, 50);
    let m = gl.integrate(|x| x / (1.0 + vs2 * x).sqrt(), 0.0, a, 50);
    assert!(rel_err(m / z, alpha_star(vs2, a).unwrap() * a) < 1e-13);
    assert!(rel_err(m / z, 4.0) < 1e-13);
}

#[test]
fn entropy_closed_form_matches_direct() {
    let gl = GaussLegendre::new(30);
    let d = solve_b(params(1.5), PeakAvgConstraints::new(10.0, 1.0, 6.0).unwrap(), 1e-12).unwrap();
    let direct = -gl.integrate(|x| d.pdf(x) * d.pdf(x).ln(), 0.0, 10.0, 200);
    assert!((d.input_entropy().unwrap() - direct).abs() < 1e-7);

    let a = 10.0;
    let z = alpha_star(1.5, a).unwrap() * a;
    let d = solve_b(params(1.5), PeakAvgConstraints::new(a, 1.0, z).unwrap(), 1e-12).unwrap();
    assert_eq!(d.branch, Branch::ZeroB);
    let expected = (2.0 * (16f64.sqrt() - 1.0) / 1.5).ln() + 0.5 * d.mean_log_variance_factor().unwrap();
    assert!((d.input_entropy().unwrap() - expected).abs() < 1e-12);
}

#[test]
fn avg_only_normalization_and_mean() {
    let gl = GaussLegendre::new(30);
    for &vs2 in &[0.5, 1.5, 5.0] {
        for &db in &[20.0, 45.0, 60.0] {
            let p = from_db(db);
            let d = solve_mn(params(vs2), AvgOnlyConstraints::new(0.3, p).unwrap(), 1e-13).unwrap();
            let end = d.effective_end();
            let mass = gl.integrate_graded(|x| d.pdf(x), 0.0, end, 1e-2, 40);
            let mean = gl.integrate_graded(|x| x * d.pdf(x), 0.0, end, 1e-2, 40);
            assert!((mass - 1.0).abs() < 1e-9, "{vs2} {db}: {mass}");
            assert!(rel_err(mean, 0.3 * p) < 1e-8, "{vs2} {db}: {mean}");
        }
    }
}

#[test]
fn avg_only_entropy_direct_and_positive() {
    let gl = GaussLegendre::new(30);
    for &xi_p in &[10.0, 1e3] {
        let d = solve_mn(params(1.5), AvgOnlyConstraints::new(1.0, xi_p).unwrap(), 1e-13).unwrap();
        let h = d.input_entropy().unwrap();
        let direct = -gl.integrate_graded(|x| d.pdf(x) * d.pdf(x).ln(), 0.0, d.effective_end(), 1e-2, 40);
        assert!(h > 0.0);
        assert!((h - direct).abs() < 1e-7, "{h} {direct}");
    }
}

#[test]
fn avg_only_approaches_exponential_as_varsigma2_vanishes() {
    let xi_p = 5.0;
    let d = solve_mn(params(1e-6), AvgOnlyConstraints::new(0.5, 10.0).unwrap(), 1e-13).unwrap();
    for i in 0..50 {
        let x = i as f64;
        let expo = (-x / xi_p).exp() / xi_p;
        assert!((d.pdf(x) - expo).abs() < 1e-3, "{x}");
    }
}

#[test]
fn sampled_inputs_follow_cdf() {
    let d = solve_b(params(1.5), PeakAvgConstraints::new(1e3, 0.3, 1e3 / 1.5).unwrap(), 1e-12).unwrap();
    let mut xs = sample(&d, 50_000, 11).unwrap();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let ks = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = d.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value of the Kolmogorov statistic is about 1.63 / sqrt(n)
    assert!(ks < 1.63 / n.sqrt(), "{ks}");
    assert!(xs.iter().all(|&x| (0.0..=1e3).contains(&x)));
}

#[test]
fn feasibility_edge_is_a_solver_error() {
    let r = solve_b(params(1.5), PeakAvgConstraints::new(10.0, 1.0, 10.0 - 1e-9).unwrap(), 1e-12);
    assert!(r.is_err());
}
