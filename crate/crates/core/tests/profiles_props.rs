use nlpme::diagnostics::holder_fit;
use nlpme::profiles::*;
use nlpme::quadrature::{integrate_with_breaks, QuadOptions};
use nlpme::MediumParams;
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = BarenblattSpec> {
    (1usize..=3, 1.1f64..4.0, 0.1f64..=2.0, 0.3f64..3.0).prop_map(|(d, m, a, r)| {
        BarenblattSpec::new(MediumParams::new(d, m, a).unwrap(), r).unwrap()
    })
}

/// `∫_{ℝ^d} u(t, x) dx` by adaptive radial quadrature, independent of the closed form.
fn mass_at(spec: &BarenblattSpec, t: f64) -> f64 {
    let d = spec.params.d;
    let sphere = [2.0, 2.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI][d - 1];
    let front = spec.support_radius_at(t);
    let r = integrate_with_breaks(
        |r| selfsim_value(spec, t, &[r]).unwrap() * r.powi(d as i32 - 1),
        0.0,
        front,
        &[],
        QuadOptions::with_tol(1e-14, 1e-12),
    );
    sphere * r.value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mass_is_constant_in_time(spec in spec_strategy()) {
        let base = mass_at(&spec, 1.0);
        for t in [2.0, 10.0] {
            prop_assert!(((mass_at(&spec, t) - base) / base).abs() < 1e-8);
        }
        prop_assert!(((profile_mass(&spec).unwrap() - base) / base).abs() < 1e-8);
    }

    #[test]
    fn selfsimilar_collapse(spec in spec_strategy(), t in 0.1f64..50.0, y in prop::collection::vec(-1.0f64..1.0, 3)) {
        let d = spec.params.d;
        let y: Vec<f64> = y[..d].iter().map(|v| v * spec.radius * 1.1).collect();
        let lam = spec.lambda();
        let x: Vec<f64> = y.iter().map(|v| v * t.powf(lam)).collect();
        let collapsed = t.powf(d as f64 * lam) * selfsim_value(&spec, t, &x).unwrap();
        let phi = phi_value(&spec, &y);
        prop_assert!((collapsed - phi).abs() <= 1e-14 * phi.max(1.0));
    }

    #[test]
    fn profile_vanishes_outside_support(spec in spec_strategy(), s in 1.0f64..3.0) {
        let mut y = vec![0.0; spec.params.d];
        y[0] = spec.radius * s;
        prop_assert_eq!(phi_value(&spec, &y), 0.0);
    }

    #[test]
    fn radius_for_mass_roundtrip(d in 1usize..=3, m in 1.1f64..4.0, a in 0.1f64..=2.0, mass in 1e-3f64..1e3) {
        let p = MediumParams::new(d, m, a).unwrap();
        let spec = BarenblattSpec::with_mass(p, mass).unwrap();
        prop_assert!(((profile_mass(&spec).unwrap() - mass) / mass).abs() < 1e-12);
    }
}

#[test]
fn near_interface_limit() {
    for (m, alpha) in [(2.0, 1.0), (3.0, 1.0), (2.5, 0.6), (2.0, 2.0)] {
        let spec = BarenblattSpec::new(MediumParams::new(1, m, alpha).unwrap(), 1.3).unwrap();
        let h = holder_exponent(&spec.params);
        let limit = (spec.amplitude() * (2.0 * spec.radius).powf(alpha / 2.0)).powf(1.0 / (m - 1.0));
        let ratio = |gap: f64| phi_value(&spec, &[spec.radius - gap]) / gap.powf(h);
        let (far, near) = (ratio(1e-3), ratio(1e-7));
        assert!((near - limit).abs() < (far - limit).abs() + 1e-15, "m {m} alpha {alpha}");
        assert!((near - limit).abs() < 1e-5 * limit, "m {m} alpha {alpha}: {near} vs {limit}");
    }
}

#[test]
fn holder_regression_recovers_exponent() {
    for (m, alpha) in [(2.0, 1.0), (2.0, 2.0), (3.0, 1.0), (1.5, 0.3)] {
        let spec = BarenblattSpec::new(MediumParams::new(1, m, alpha).unwrap(), 1.0).unwrap();
        let fitted = holder_fit(&spec).unwrap();
        let want = holder_exponent(&spec.params);
        assert!(((fitted - want) / want).abs() < 1e-2, "m {m} alpha {alpha}: {fitted} vs {want}");
    }
}

#[test]
fn classical_parabolic_profile() {
    let p = MediumParams::new(1, 2.0, 2.0).unwrap();
    for r in [0.5, 1.0, 2.0] {
        let spec = BarenblattSpec::new(p, r).unwrap();
        for i in 0..=40 {
            let y = -1.2 * r + 2.4 * r * i as f64 / 40.0;
            let want = ((r * r - y * y) / 6.0).max(0.0);
            assert!((phi_value(&spec, &[y]) - want).abs() < 1e-15, "R {r} y {y}");
        }
    }
}
