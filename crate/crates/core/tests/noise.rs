use vlc_capacity::noise::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn shot_noise_scales_with_square_roots() {
    let base = NoiseInputs::representative();
    let (s0, b0, d0) = shot_noise(&base).unwrap();
    let mut quad_b = base;
    quad_b.bandwidth *= 4.0;
    let (s1, b1, d1) = shot_noise(&quad_b).unwrap();
    assert!(rel(s1, 2.0 * s0) < 1e-14 && rel(b1, 2.0 * b0) < 1e-14 && rel(d1, 2.0 * d0) < 1e-14);
    let mut quad_x = base;
    quad_x.x *= 4.0;
    let (s2, b2, _) = shot_noise(&quad_x).unwrap();
    assert!(rel(s2, 2.0 * s0) < 1e-14 && rel(b2, b0) < 1e-14);
}

#[test]
fn reference_arithmetic() {
    let mut inp = NoiseInputs::representative();
    inp.q = 1.6e-19;
    inp.eta = 0.5;
    inp.h_nu = 3.6e-19;
    inp.bandwidth = 1e7;
    inp.x = 1e-3;
    let (i_s, _, _) = shot_noise(&inp).unwrap();
    let expected = (2.0 * 1.6e-19f64.powi(2) * 0.5 * 1e7 * 1e-3 / 3.6e-19).sqrt();
    assert!(rel(i_s, expected) < 1e-14);
    let th = thermal_noise(1.380649e-23, 300.0, 1e7, 50.0).unwrap();
    assert!(rel(th, (4.0 * 1.380649e-23 * 300.0 * 1e7 / 50.0f64).sqrt()) < 1e-14);
}

#[test]
fn amplifier_is_half_thermal_power_at_equal_resistance() {
    let th = thermal_noise(1.38e-23, 290.0, 1e6, 100.0).unwrap();
    let am = amplifier_noise(1.38e-23, 290.0, 1e6, 100.0).unwrap();
    assert!(rel(am / th, 0.5f64.sqrt()) < 1e-14);
    assert!(thermal_noise(1.38e-23, 290.0, 1e6, 0.0).is_err());
}

#[test]
fn split_is_invariant_to_scale() {
    let b = NoiseBudget::from_inputs(NoiseInputs::representative()).unwrap();
    let (v1, s1) = variance_split(&b, 1.0).unwrap();
    let (v2, s2) = variance_split(&b, 1e20).unwrap();
    assert!(rel(v1, v2) < 1e-12);
    assert!(rel(s2, 1e20 * s1) < 1e-12);
    assert!(v1 > 0.0 && v1 <= 10.0, "{v1}");
    assert!(variance_split(&b, 0.0).is_err());
}

#[test]
fn coefficient_is_independent_of_operating_point() {
    let mut inp = NoiseInputs::representative();
    let v1 = variance_split(&NoiseBudget::from_inputs(inp).unwrap(), 1.0).unwrap().0;
    inp.x *= 3.0;
    let v2 = variance_split(&NoiseBudget::from_inputs(inp).unwrap(), 1.0).unwrap().0;
    assert!(rel(v1, v2) < 1e-12);
}
