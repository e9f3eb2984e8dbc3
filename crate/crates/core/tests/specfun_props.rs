use nlpme::specfun::*;
use nlpme::MediumParams;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = MediumParams> {
    (1usize..=3, 1.05f64..4.0, 0.05f64..=2.0).prop_map(|(d, m, a)| MediumParams::new(d, m, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn terminating_series_matches_polynomial(a in -3.0f64..3.0, c in 0.3f64..5.0, z in 0.0f64..=1.0) {
        let one = hyp2f1(a, -1.0, c, z).unwrap();
        prop_assert!((one - (1.0 - a * z / c)).abs() < 1e-14);
        // ₂F₁(a, −2; c; z) = 1 − 2az/c + a(a+1)z²/(c(c+1))
        let two = hyp2f1(a, -2.0, c, z).unwrap();
        let poly = 1.0 - 2.0 * a * z / c + a * (a + 1.0) * z * z / (c * (c + 1.0));
        prop_assert!((two - poly).abs() < 1e-14 * poly.abs().max(1.0));
    }

    #[test]
    fn amplitude_factorises(p in params()) {
        let k = barenblatt_k(&p).unwrap();
        let rhs = p.d as f64 * lambda_exponent(&p) * getoor_constant(p.d, p.alpha).unwrap();
        prop_assert!((k - rhs).abs() < 1e-14 * rhs.abs().max(1.0));
    }

    #[test]
    fn lambda_decreases(p in params(), dm in 0.01f64..1.0, da in 0.01f64..0.5) {
        let base = lambda_exponent(&p);
        let heavier = MediumParams { m: p.m + dm, ..p };
        prop_assert!(lambda_exponent(&heavier) < base);
        if p.alpha + da <= 2.0 {
            let higher = MediumParams { alpha: p.alpha + da, ..p };
            prop_assert!(lambda_exponent(&higher) < base);
        }
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..30.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-13);
    }

    #[test]
    fn euler_transformation(a in 0.1f64..2.0, b in 0.1f64..2.0, dc in 0.2f64..3.0, z in 0.0f64..0.95) {
        // ₂F₁(a,b;c;z) = (1−z)^{c−a−b} ₂F₁(c−a,c−b;c;z)
        let c = a + b + dc;
        let lhs = hyp2f1(a, b, c, z).unwrap();
        let rhs = (1.0 - z).powf(c - a - b) * hyp2f1(c - a, c - b, c, z).unwrap();
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-11);
    }

    #[test]
    fn riesz_branches_meet(gamma in 0.2f64..2.0, beta in 0.2f64..1.8) {
        // the profile is only Hölder at |x| = 1, so the jump across it must
        // shrink with the offset rather than vanish outright
        let d = 3;
        let gap = |delta: f64| {
            let inside = riesz_profile_closed_form(1.0 - delta, gamma, beta, d).unwrap();
            let outside = riesz_profile_closed_form(1.0 + delta, gamma, beta, d).unwrap();
            ((inside - outside) / inside).abs()
        };
        let (wide, narrow) = (gap(1e-4), gap(1e-10));
        prop_assert!(narrow < 0.5 * wide, "{narrow} vs {wide}");
        prop_assert!(narrow < 1e-2);
    }
}

#[test]
fn getoor_constant_classical_limit() {
    for d in 1..=5 {
        let k = getoor_constant(d, 2.0).unwrap();
        assert!((k - 1.0 / (2.0 * d as f64)).abs() < 1e-13, "d = {d}: {k}");
    }
}
