//! Closed forms checked against independent evaluations.

use serde::Serialize;

use super::fit::log_log_slope;
use crate::error::{ensure, Error, Result};
use crate::fracops::{frac_laplacian_quadrature, riesz_quadrature, CompactFn, SpectralPlan};
use crate::grid::{Field, Grid};
use crate::profiles::{holder_exponent, BarenblattSpec};
use crate::quadrature::QuadOptions;
use crate::specfun::{getoor_constant, riesz_profile_closed_form};

/// One sampled radius: closed-form value, independent value, error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointCheck {
    pub r: f64,
    pub expected: f64,
    pub computed: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub name: String,
    pub rows: Vec<PointCheck>,
}

impl PointReport {
    pub fn max_error(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.error))
    }
}

fn point_on_axis(d: usize, r: f64) -> Vec<f64> {
    let mut x = vec![0.0; d];
    x[0] = r;
    x
}

/// `|K_{α,d}·(−Δ)^{α/2}(1−|y|²)₊^{α/2}(x) − 1|` at `x = (r, 0, …)`, by quadrature.
pub fn verify_getoor(d: usize, alpha: f64, radii: &[f64], opts: QuadOptions) -> Result<PointReport> {
    ensure!((1..=3).contains(&d), Domain, "d must be 1, 2 or 3, got {d}");
    ensure!(alpha > 0.0 && alpha < 2.0, Domain, "alpha = {alpha} outside (0, 2)");
    ensure!(
        radii.iter().all(|r| (0.0..=0.9).contains(r)),
        Domain,
        "sample radii must lie in [0, 0.9]"
    );
    let k = getoor_constant(d, alpha)?;
    let phi = CompactFn::unit_ball_power(d, alpha);
    let rows = radii
        .iter()
        .map(|&r| {
            let value = k * frac_laplacian_quadrature(&phi, &point_on_axis(d, r), alpha, opts)?;
            Ok(PointCheck { r, expected: 1.0, computed: value, error: (value - 1.0).abs() })
        })
        .collect::<Result<_>>()?;
    Ok(PointReport { name: format!("getoor d={d} alpha={alpha}"), rows })
}

/// Relative gap between the closed form of `I_β(1−|·|²)₊^{γ/2}` and quadrature.
pub fn verify_lemma(
    gamma: f64,
    beta: f64,
    d: usize,
    radii: &[f64],
    opts: QuadOptions,
) -> Result<PointReport> {
    ensure!((1..=3).contains(&d), Domain, "d must be 1, 2 or 3, got {d}");
    ensure!(
        beta > 0.0 && beta < (d as f64).min(2.0),
        Domain,
        "beta = {beta} outside (0, min(d, 2))"
    );
    ensure!(gamma > 0.0, Domain, "gamma must be positive, got {gamma}");
    ensure!(
        radii.iter().all(|r| *r >= 0.0 && !(0.95..=1.05).contains(r)),
        Domain,
        "radii must be nonnegative and avoid [0.95, 1.05]"
    );
    let f = CompactFn::unit_ball_power(d, gamma);
    let rows = radii
        .iter()
        .map(|&r| {
            let closed = riesz_profile_closed_form(r, gamma, beta, d)?;
            let quad = riesz_quadrature(&f, &point_on_axis(d, r), beta, opts)?;
            Ok(PointCheck { r, expected: closed, computed: quad, error: ((quad - closed) / closed).abs() })
        })
        .collect::<Result<_>>()?;
    Ok(PointReport { name: format!("riesz gamma={gamma} beta={beta} d={d}"), rows })
}

/// Smooth test field with zero Nyquist content: a sum of low modes with
/// deterministic pseudo-random coefficients.
pub fn ops_test_field(grid: Grid) -> Field {
    let l = grid.half_width;
    let k = std::f64::consts::PI / l;
    let modes = (grid.n / 8).max(2);
    Field::from_fn(grid, |x| {
        (1..=modes)
            .map(|j| {
                let jf = j as f64;
                let phase = 0.37 * jf * jf;
                let amp = 1.0 / (1.0 + jf);
                let y = x.get(1).copied().unwrap_or(0.0);
                amp * ((jf * k * x[0] + phase).cos() + (jf * k * (x[0] + y) - phase).sin())
            })
            .sum()
    })
    .expect("finite test field")
}

/// `max |∇·∇^{α−1}f + (−Δ)^{α/2}f|` for the spectral operators.
pub fn verify_ops(f: &Field, alpha: f64) -> Result<f64> {
    ensure!(alpha > 0.0 && alpha <= 2.0, Domain, "alpha = {alpha} outside (0, 2]");
    let plan = SpectralPlan::new(*f.grid());
    let div = plan.divergence(&plan.frac_gradient(f, alpha - 1.0));
    let lap = plan.frac_laplacian(f, alpha);
    Ok(div.values().iter().zip(lap.values()).fold(0.0, |m, (a, b)| m.max((a + b).abs())))
}

/// Regression of `log Φ` on `log(R − |y|)` over `R − |y| ∈ [1e-4 R, 1e-2 R]`.
pub fn holder_fit(spec: &BarenblattSpec) -> Result<f64> {
    let s = spec.params.alpha / (2.0 * (spec.params.m - 1.0));
    if s > 1.0 {
        return Err(Error::Domain(format!(
            "boundary exponent {s} exceeds 1; the fit is restricted to exponents <= 1"
        )));
    }
    let r = spec.radius;
    let points: Vec<(f64, f64)> = (0..=40)
        .map(|i| {
            let gap = r * 10f64.powf(-2.0 - i as f64 / 20.0);
            (gap, spec.phi_of_r2((r - gap) * (r - gap)))
        })
        .collect();
    log_log_slope(&points)
}

/// `|holder_fit − min{α/(2(m−1)), 1}| / min{…}`.
pub fn holder_fit_error(spec: &BarenblattSpec) -> Result<f64> {
    let want = holder_exponent(&spec.params);
    Ok((holder_fit(spec)? - want).abs() / want)
}
