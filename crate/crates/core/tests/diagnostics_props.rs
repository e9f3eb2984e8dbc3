use nlpme::diagnostics::decay::{fit_decay_points, theoretical_slope};
use nlpme::diagnostics::inequalities::{audit_fields, random_audit_field};
use nlpme::diagnostics::*;
use nlpme::profiles::{selfsim_lp_norm, BarenblattSpec};
use nlpme::quadrature::QuadOptions;
use nlpme::{Grid, MediumParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn audit_grid() -> Grid {
    Grid::new(1, 8.0, 512).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_trajectories_decay_at_the_similarity_rate(
        d in 1usize..=3,
        m in 1.1f64..4.0,
        alpha in 0.1f64..=2.0,
        mass in 0.1f64..10.0,
    ) {
        let p = MediumParams::new(d, m, alpha).unwrap();
        let spec = BarenblattSpec::with_mass(p, mass).unwrap();
        for q in [1.5, 2.0, 4.0, f64::INFINITY] {
            let idx = NormIndex::new(q).unwrap();
            let points = (0..=30)
                .map(|i| {
                    let t = 2f64.powf(1.0 + i as f64 / 10.0);
                    (t, selfsim_lp_norm(&spec, t, q).unwrap())
                })
                .collect();
            let r = fit_decay_points(&p, idx, (2.0, 16.0), points, mass).unwrap();
            prop_assert!((r.fitted_slope - theoretical_slope(&p, idx)).abs() < 1e-6);
        }
    }

    #[test]
    fn nash_ratio_is_homogeneous(seed in any::<u64>(), scale in 1e-3f64..1e3, alpha in 0.1f64..=2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_audit_field(audit_grid(), &mut rng).unwrap();
        let scaled = v.map(|x| scale * x).unwrap();
        let (a, b) = (check_nash(&v, alpha).unwrap(), check_nash(&scaled, alpha).unwrap());
        prop_assert!(((a - b) / a).abs() < 1e-12);
    }

    #[test]
    fn parseval_case_of_stroock_varopoulos(seed in any::<u64>(), alpha in 0.1f64..=2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_audit_field(audit_grid(), &mut rng).unwrap();
        let (lhs, rhs) = inequalities::stroock_varopoulos_sides(&w, alpha, 2.0).unwrap();
        prop_assert!(((lhs - rhs) / rhs).abs() < 1e-11);
    }
}

#[test]
fn inequality_audits_hold_on_random_suites() {
    for alpha in [0.5, 1.0, 1.5] {
        let reports = audit_all(audit_grid(), alpha, 2.0, &[1.5, 2.0, 3.0], 100, 7).unwrap();
        assert_eq!(reports.len(), 7);
        for r in &reports {
            assert!(r.passed(), "{} alpha {alpha} index {:?}: {}", r.kind.name(), r.index, r.worst_margin);
            assert!(r.trials >= 100);
        }
    }
}

#[test]
fn audit_suites_are_seeded() {
    let a = audit_fields(audit_grid(), 5, 11).unwrap();
    let b = audit_fields(audit_grid(), 5, 11).unwrap();
    let c = audit_fields(audit_grid(), 5, 12).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn getoor_error_shrinks_with_tolerance() {
    let radii = [0.0, 0.3, 0.6, 0.9];
    let errors: Vec<f64> = [1e-2, 1e-3, 1e-4, 1e-6]
        .iter()
        .map(|&tol| verify_getoor(1, 1.5, &radii, QuadOptions::with_tol(tol, tol)).unwrap().max_error())
        .collect();
    assert!(errors.windows(2).all(|w| w[1] <= w[0]), "{errors:?}");
    assert!(errors[3] < 5e-3);
}
