use std::f64::consts::PI;

use nlpme::fracops::*;
use nlpme::quadrature::QuadOptions;
use nlpme::{Field, Grid};
use proptest::prelude::*;

/// Random trigonometric polynomial on the lowest eight modes, no Nyquist content.
fn trig_field(grid: Grid, coeffs: &[(f64, f64)]) -> Field {
    let k = PI / grid.half_width;
    Field::from_fn(grid, |x| {
        let y = x.get(1).copied().unwrap_or(0.0);
        coeffs
            .iter()
            .enumerate()
            .map(|(j, (a, b))| {
                let kj = (j + 1) as f64 * k;
                a * (kj * x[0]).cos() + b * (kj * (x[0] - y)).sin() + 0.3 * a * (kj * y).cos()
            })
            .sum::<f64>()
            + 0.7
    })
    .unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)
}

fn grid_1d() -> Grid {
    Grid::new(1, 2.5, 64).unwrap()
}

fn grid_2d() -> Grid {
    Grid::new(2, 2.5, 32).unwrap()
}

fn max_gap(a: &Field, b: &Field) -> f64 {
    a.values().iter().zip(b.values()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_semigroup(c in coeffs(), a in 0.05f64..1.0, b in 0.05f64..1.0, two_d in any::<bool>()) {
        let f = trig_field(if two_d { grid_2d() } else { grid_1d() }, &c);
        let plan = SpectralPlan::new(*f.grid());
        let lhs = plan.frac_laplacian(&plan.frac_laplacian(&f, a), b);
        let rhs = plan.frac_laplacian(&f, a + b);
        prop_assert!(max_gap(&lhs, &rhs) < 1e-11 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn outputs_are_mean_free(c in coeffs(), alpha in 0.1f64..=2.0, two_d in any::<bool>()) {
        let f = trig_field(if two_d { grid_2d() } else { grid_1d() }, &c);
        prop_assert!(frac_laplacian_spectral(&f, alpha).unwrap().mean().abs() < 1e-13);
        prop_assert!(riesz_potential_spectral(&f, alpha.min(0.9)).unwrap().mean().abs() < 1e-13);
        let g = frac_gradient_spectral(&f, alpha - 1.0).unwrap();
        for j in 0..f.grid().d {
            let mean = g.component(j).iter().sum::<f64>() / f.grid().len() as f64;
            prop_assert!(mean.abs() < 1e-13);
        }
    }

    #[test]
    fn parseval_symmetry(c1 in coeffs(), c2 in coeffs(), alpha in 0.1f64..=2.0) {
        let f = trig_field(grid_1d(), &c1);
        let g = trig_field(grid_1d(), &c2);
        let plan = SpectralPlan::new(*f.grid());
        let lhs = f.dot(&plan.frac_laplacian(&g, alpha));
        let rhs = plan.frac_laplacian(&f, alpha / 2.0).dot(&plan.frac_laplacian(&g, alpha / 2.0));
        prop_assert!((lhs - rhs).abs() < 1e-11 * lhs.abs().max(1.0));
    }

    #[test]
    fn divergence_of_gradient(c in coeffs(), alpha in 0.1f64..=2.0, two_d in any::<bool>()) {
        let f = trig_field(if two_d { grid_2d() } else { grid_1d() }, &c);
        let plan = SpectralPlan::new(*f.grid());
        let div = plan.divergence(&plan.frac_gradient(&f, alpha - 1.0));
        let lap = plan.frac_laplacian(&f, alpha);
        let sum = div.values().iter().zip(lap.values()).fold(0.0, |m: f64, (a, b)| m.max((a + b).abs()));
        prop_assert!(sum < 1e-12);
    }

    #[test]
    fn translation_covariance(c in coeffs(), shift in 0usize..64, alpha in 0.1f64..=2.0) {
        let g = grid_1d();
        let f = trig_field(g, &c);
        let n = g.n;
        let rolled = Field::new(g, (0..n).map(|i| f.values()[(i + shift) % n]).collect()).unwrap();
        let a = frac_laplacian_spectral(&f, alpha).unwrap();
        let b = frac_laplacian_spectral(&rolled, alpha).unwrap();
        for i in 0..n {
            prop_assert!((b.values()[i] - a.values()[(i + shift) % n]).abs() < 1e-12);
        }
    }
}

/// `(1 − |x|²)₊⁴`: C³, compactly supported, with a rapidly decaying spectrum.
fn bump(x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    (1.0 - r2).max(0.0).powi(4)
}

#[test]
fn spectral_matches_quadrature_on_compact_bump() {
    // periodic images decay like L^{−(d+α)}, so the box is wider for small α
    for (alpha, half_width, n) in [(1.0, 16.0, 4096), (1.5, 16.0, 4096), (0.5, 64.0, 16384)] {
        let g = Grid::new(1, half_width, n).unwrap();
        let f = Field::from_fn(g, bump).unwrap();
        let spectral = frac_laplacian_spectral(&f, alpha).unwrap();
        let compact = CompactFn::new(vec![0.0], 1.0, bump);
        for x in [0.0, 0.25, 0.5, 0.75] {
            let i = ((x + half_width) / g.spacing()).round() as usize;
            let xi = g.coord(i);
            let quad = frac_laplacian_quadrature(&compact, &[xi], alpha, QuadOptions::default()).unwrap();
            let gap = (spectral.values()[i] - quad).abs();
            assert!(gap < 1e-3, "alpha {alpha} x {xi}: spectral {} quadrature {quad}", spectral.values()[i]);
        }
    }
}

#[test]
fn riesz_spectral_matches_quadrature_in_two_dimensions() {
    // I_β in d = 2 for β = 0.5: far field |x|^{−1.5}, periodic images are small
    let beta = 0.5;
    let g = Grid::new(2, 8.0, 256).unwrap();
    let f = Field::from_fn(g, bump).unwrap();
    let spectral = riesz_potential_spectral(&f, beta).unwrap();
    let compact = CompactFn::new(vec![0.0, 0.0], 1.0, bump);
    // the spectral result is the potential of f − mean(f); compare differences
    let at = |i: usize, j: usize| spectral.values()[i * g.n + j];
    let quad = |x: f64, y: f64| riesz_quadrature(&compact, &[x, y], beta, QuadOptions::default()).unwrap();
    let c = g.n / 2;
    let spectral_gap = at(c, c) - at(c + 8, c);
    let quad_gap = quad(0.0, 0.0) - quad(g.coord(c + 8), 0.0);
    assert!((spectral_gap - quad_gap).abs() < 1e-3 * quad_gap.abs(), "{spectral_gap} vs {quad_gap}");
}
