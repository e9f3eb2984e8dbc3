//! Decay rates of `‖u(t)‖_p` and the explicit constant of the decay bound
//!
//! ```text
//! ‖u(t)‖_p ≤ C(d,α,m,p) · M^{b/(a−p)} · t^{−dλ(1−1/p)},   M = ‖u₀‖₁
//! ```

use serde::Serialize;

use super::fit::log_log_slope;
use super::norms::{lp_norm_index, NormIndex};
use crate::error::{ensure, Result};
use crate::solver::Trajectory;
use crate::specfun::{lambda_exponent, MediumParams};

/// Fewest points a decay fit accepts.
pub const MIN_FIT_POINTS: usize = 10;
/// Smallest ratio `t_max/t_min` a fit window may have.
pub const MIN_FIT_SPAN: f64 = 8.0;
/// Fraction of the window's `log t` extent the points must cover.
pub const MIN_FIT_COVERAGE: f64 = 0.75;

/// `−dλ(1 − 1/p)`.
pub fn theoretical_slope(params: &MediumParams, p: NormIndex) -> f64 {
    -(params.d as f64) * lambda_exponent(params) * (1.0 - p.reciprocal())
}

/// Exponents of the interpolation inequality `‖u‖_p^a ≤ C_N ‖∇^{α/2}u^{r/2}‖₂² ‖u‖₁^b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GnExponents {
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

pub fn gn_exponents(params: &MediumParams, p: f64) -> Result<GnExponents> {
    params.validate()?;
    ensure!(p.is_finite() && p > 1.0, Domain, "p must be finite and > 1, got {p}");
    ensure!(p >= params.m - 1.0, Domain, "p = {p} must be at least m - 1 = {}", params.m - 1.0);
    let d = params.d as f64;
    let (m, alpha) = (params.m, params.alpha);
    let r = p + m - 1.0;
    let a = p / (p - 1.0) * (d * (r - 1.0) + alpha) / d;
    let b = (p * alpha + d * (m - 1.0)) / (d * (p - 1.0));
    Ok(GnExponents { a, b, r })
}

/// Explicit constant of the decay bound, evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayConstant {
    pub exponents: GnExponents,
    /// `K = 4p(p−1)(m−1) / (C_N (p+m−1)²)`.
    pub k: f64,
    /// `(K(a/p − 1))^{−1/(a−p)}`.
    pub constant: f64,
    /// `[4(m−1)(d(m−1)+α)/(C_N d) · p/(p+m−1)²]^{−dλ(1−1/p)}`.
    pub constant_bracket: f64,
    /// Time exponent `−dλ(1−1/p)`.
    pub time_exponent: f64,
    /// Mass exponent `b/(a−p)`.
    pub mass_exponent: f64,
}

impl DecayConstant {
    /// Right-hand side of the decay bound at time `t` for initial mass `mass`.
    pub fn bound(&self, mass: f64, t: f64) -> f64 {
        self.constant * mass.powf(self.mass_exponent) * t.powf(self.time_exponent)
    }
}

pub fn decay_constant(params: &MediumParams, p: f64, c_n: f64) -> Result<DecayConstant> {
    ensure!(c_n.is_finite() && c_n > 0.0, Domain, "C_N must be positive, got {c_n}");
    let ex = gn_exponents(params, p)?;
    let d = params.d as f64;
    let (m, alpha) = (params.m, params.alpha);
    let k = 4.0 * p * (p - 1.0) * (m - 1.0) / (c_n * ex.r * ex.r);
    let constant = (k * (ex.a / p - 1.0)).powf(-1.0 / (ex.a - p));
    let time_exponent = theoretical_slope(params, NormIndex::Finite(p));
    let base = 4.0 * (m - 1.0) * (d * (m - 1.0) + alpha) / (c_n * d) * p / (ex.r * ex.r);
    Ok(DecayConstant {
        exponents: ex,
        k,
        constant,
        constant_bracket: base.powf(time_exponent),
        time_exponent,
        mass_exponent: ex.b / (ex.a - p),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub p: f64,
    pub fitted_slope: f64,
    pub theoretical_slope: f64,
    pub fit_window: (f64, f64),
    /// `M = ‖u₀‖₁`.
    pub mass: f64,
    /// Empirical Nash constant used for `c_theory`, if any.
    pub c_n: Option<f64>,
    /// Prefactor `C(d,α,m,p)·M^{b/(a−p)}` of the bound.
    pub c_theory: Option<f64>,
    pub points: Vec<(f64, f64)>,
}

impl DecayReport {
    /// `|fitted − theoretical| / |theoretical|`, or the absolute gap when the
    /// theoretical slope is zero.
    pub fn relative_deviation(&self) -> f64 {
        let gap = (self.fitted_slope - self.theoretical_slope).abs();
        if self.theoretical_slope == 0.0 {
            gap
        } else {
            gap / self.theoretical_slope.abs()
        }
    }
}

/// `(t, ‖u(t)‖_p)` inside the window. Uses the per-step series for
/// `p ∈ {1, 2, ∞}` and the snapshots otherwise.
pub fn decay_points(traj: &Trajectory, p: NormIndex, window: (f64, f64)) -> Vec<(f64, f64)> {
    let (lo, hi) = window;
    let inside = |t: f64| t >= lo * (1.0 - 1e-12) && t <= hi * (1.0 + 1e-12);
    let from_series = |f: fn(&crate::solver::SeriesRow) -> f64| {
        traj.series.iter().filter(|r| inside(r.t)).map(|r| (r.t, f(r))).collect()
    };
    match p {
        NormIndex::Infinity => from_series(|r| r.linf),
        NormIndex::Finite(q) if q == 1.0 => from_series(|r| r.l1),
        NormIndex::Finite(q) if q == 2.0 => from_series(|r| r.l2),
        _ => traj
            .snapshots
            .iter()
            .filter(|s| inside(s.t))
            .map(|s| (s.t, lp_norm_index(&s.field, p)))
            .collect(),
    }
}

/// Least-squares slope of `log ‖u‖_p` against `log t` over `window`.
pub fn fit_decay(traj: &Trajectory, p: NormIndex, window: (f64, f64)) -> Result<DecayReport> {
    let points = decay_points(traj, p, window);
    let mass = traj.series.first().map_or(0.0, |r| r.l1);
    fit_decay_points(&traj.params, p, window, points, mass)
}

/// [`fit_decay`] on explicit `(t, ‖u(t)‖_p)` pairs already restricted to the window.
pub fn fit_decay_points(
    params: &MediumParams,
    p: NormIndex,
    window: (f64, f64),
    points: Vec<(f64, f64)>,
    mass: f64,
) -> Result<DecayReport> {
    let (lo, hi) = window;
    ensure!(lo > 0.0 && hi > lo, Domain, "fit window ({lo}, {hi}) is not a positive interval");
    ensure!(
        points.len() >= MIN_FIT_POINTS,
        InsufficientData,
        "{} points in the fit window, need {MIN_FIT_POINTS}",
        points.len()
    );
    ensure!(
        hi / lo >= MIN_FIT_SPAN * (1.0 - 1e-9),
        InsufficientData,
        "fit window spans a factor {} in t, need {MIN_FIT_SPAN}",
        hi / lo
    );
    let (t0, t1) = (points[0].0, points[points.len() - 1].0);
    let coverage = (t1 / t0).ln() / (hi / lo).ln();
    ensure!(
        coverage >= MIN_FIT_COVERAGE,
        InsufficientData,
        "fit points cover {coverage:.2} of the window in log t, need {MIN_FIT_COVERAGE}"
    );
    Ok(DecayReport {
        p: p.as_f64(),
        fitted_slope: log_log_slope(&points)?,
        theoretical_slope: theoretical_slope(params, p),
        fit_window: window,
        mass,
        c_n: None,
        c_theory: None,
        points,
    })
}

/// [`fit_decay`] plus the explicit prefactor for finite `p > 1`, `p ≥ m − 1`.
pub fn fit_decay_with_constant(
    traj: &Trajectory,
    p: NormIndex,
    window: (f64, f64),
    c_n: f64,
) -> Result<DecayReport> {
    let mut report = fit_decay(traj, p, window)?;
    report.c_n = Some(c_n);
    if let NormIndex::Finite(q) = p {
        if q > 1.0 && q >= traj.params.m - 1.0 {
            let c = decay_constant(&traj.params, q, c_n)?;
            report.c_theory = Some(c.constant * report.mass.powf(c.mass_exponent));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::norms::sample_selfsim;
    use crate::grid::Grid;
    use crate::profiles::{selfsim_lp_norm, BarenblattSpec};
    use crate::solver::Snapshot;

    fn exact_trajectory() -> Trajectory {
        let p = MediumParams::new(1, 2.0, 1.0).unwrap();
        let spec = BarenblattSpec::with_mass(p, 1.0).unwrap();
        let g = Grid::new(1, 8.0, 2048).unwrap();
        let snaps = (0..=40)
            .map(|i| {
                let t = 2f64.powf(i as f64 / 10.0);
                Snapshot { t, field: sample_selfsim(&spec, t, g).unwrap() }
            })
            .collect();
        Trajectory::from_snapshots(p, snaps).unwrap()
    }

    #[test]
    fn benchmark_exponents() {
        let p = MediumParams::new(1, 2.0, 1.0).unwrap();
        let c = decay_constant(&p, 2.0, 1.0).unwrap();
        assert_eq!((c.exponents.r, c.exponents.a, c.exponents.b), (3.0, 6.0, 3.0));
        assert!((1.0 / (c.exponents.a / 2.0 - 1.0) - 0.5).abs() < 1e-15);
        assert!((c.time_exponent + 0.25).abs() < 1e-15);
        assert!((c.constant - c.constant_bracket).abs() < 1e-14 * c.constant);
    }

    #[test]
    fn constant_domain() {
        let p = MediumParams::new(1, 3.0, 1.0).unwrap();
        assert!(decay_constant(&p, 1.0, 1.0).is_err());
        assert!(decay_constant(&p, 1.5, 1.0).is_err());
        assert!(decay_constant(&p, 2.0, 0.0).is_err());
    }

    #[test]
    fn exact_slopes() {
        let p = MediumParams::new(1, 2.0, 1.0).unwrap();
        let spec = BarenblattSpec::with_mass(p, 1.0).unwrap();
        for (q, want) in [(1.0, 0.0), (2.0, -0.25), (f64::INFINITY, -0.5)] {
            let idx = NormIndex::new(q).unwrap();
            let points = (0..=30)
                .map(|i| {
                    let t = 2f64.powf(1.0 + i as f64 / 10.0);
                    (t, selfsim_lp_norm(&spec, t, q).unwrap())
                })
                .collect();
            let r = fit_decay_points(&p, idx, (2.0, 16.0), points, 1.0).unwrap();
            assert!((r.theoretical_slope - want).abs() < 1e-15);
            assert!((r.fitted_slope - want).abs() < 1e-12, "p = {q}: {}", r.fitted_slope);
        }
    }

    #[test]
    fn sampled_slopes() {
        let traj = exact_trajectory();
        for (q, want) in [(1.0, 0.0), (2.0, -0.25), (3.0, -1.0 / 3.0), (f64::INFINITY, -0.5)] {
            let r = fit_decay(&traj, NormIndex::new(q).unwrap(), (2.0, 16.0)).unwrap();
            assert!((r.fitted_slope - want).abs() < 1e-4, "p = {q}: {}", r.fitted_slope);
        }
    }

    #[test]
    fn window_requirements() {
        let traj = exact_trajectory();
        let p = NormIndex::Finite(2.0);
        assert!(fit_decay(&traj, p, (2.0, 8.0)).is_err());
        assert!(fit_decay(&traj, p, (4.0, 2.0)).is_err());
        assert!(fit_decay(&traj, p, (100.0, 1000.0)).is_err());
    }
}
