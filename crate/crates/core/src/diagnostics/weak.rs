//! Residual of the space-time weak formulation
//!
//! ```text
//! ∫∫ u (φₜ − ∇^{α−1}(u^{m−1})·∇φ) dx dt + ∫ u(t₀)φ(t₀) dx − ∫ u(T)φ(T) dx = 0
//! ```
//!
//! The terminal term vanishes for test functions that are zero near `T`; it
//! is kept so that time-independent test functions are admissible too.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::fracops::SpectralPlan;
use crate::grid::Field;
use crate::solver::Trajectory;
use crate::specfun::MediumParams;

/// `e^{−1/s}` for `s > 0`, zero otherwise.
fn flat(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn flat_prime(s: f64) -> f64 {
    if s > 0.0 {
        flat(s) / (s * s)
    } else {
        0.0
    }
}

/// Smooth step from 1 at `s ≤ 0` to 0 at `s ≥ 1`, and its derivative.
fn smooth_step(s: f64) -> (f64, f64) {
    let (a, b) = (flat(1.0 - s), flat(s));
    let den = a + b;
    let value = a / den;
    let slope = -(flat_prime(1.0 - s) * b + a * flat_prime(s)) / (den * den);
    (value, slope)
}

/// Radial bump: 1 on `|x − c| ≤ inner`, smoothly 0 beyond `outer`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialBump {
    pub center: Vec<f64>,
    pub inner: f64,
    pub outer: f64,
}

impl SpatialBump {
    /// Value and gradient at `x`.
    pub fn eval(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let rel: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let r = rel.iter().map(|v| v * v).sum::<f64>().sqrt();
        let width = self.outer - self.inner;
        let (v, dv) = smooth_step((r - self.inner) / width);
        let grad = if r > 0.0 && dv != 0.0 {
            rel.iter().map(|c| dv / width * c / r).collect()
        } else {
            vec![0.0; x.len()]
        };
        (v, grad)
    }
}

/// Time factor of the test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TimeCutoff {
    Constant,
    /// 1 before `start`, 0 after `end`, smooth in between.
    Fade { start: f64, end: f64 },
}

impl TimeCutoff {
    pub fn eval(&self, t: f64) -> (f64, f64) {
        match *self {
            Self::Constant => (1.0, 0.0),
            Self::Fade { start, end } => {
                let (v, dv) = smooth_step((t - start) / (end - start));
                (v, dv / (end - start))
            }
        }
    }
}

/// Separable test function `φ(t, x) = χ(t) ψ(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub space: SpatialBump,
    pub time: TimeCutoff,
}

/// `Σ_k τ_k F(t_k)` with trapezoid weights over the snapshot times.
fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Weak-form residual of a trajectory, trapezoidal in time over its snapshots.
pub fn weak_residual(traj: &Trajectory, params: &MediumParams, phi: &TestFunction) -> Result<f64> {
    ensure!(traj.snapshots.len() >= 2, InsufficientData, "weak residual needs at least 2 snapshots");
    let grid = *traj.snapshots[0].field.grid();
    ensure!(phi.space.center.len() == grid.d, InvalidParams, "test function dimension mismatch");
    ensure!(
        phi.space.inner >= 0.0 && phi.space.outer > phi.space.inner,
        InvalidParams,
        "test function radii must satisfy 0 <= inner < outer"
    );
    let reach = phi.space.center.iter().map(|c| c.abs()).fold(0.0, f64::max) + phi.space.outer;
    ensure!(
        reach < grid.half_width,
        InvalidParams,
        "test function support reaches {reach}, outside the box of half-width {}",
        grid.half_width
    );
    if let TimeCutoff::Fade { start, end } = phi.time {
        ensure!(end > start, InvalidParams, "fade interval must have positive length");
    }

    let mut psi = Vec::with_capacity(grid.len());
    let mut grad: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len()); grid.d];
    for k in 0..grid.len() {
        let p = grid.point(k);
        let (v, g) = phi.space.eval(&p[..grid.d]);
        psi.push(v);
        for (dst, gj) in grad.iter_mut().zip(g) {
            dst.push(gj);
        }
    }
    let psi = Field::new(grid, psi)?;
    let plan = SpectralPlan::new(grid);

    let mut times = Vec::with_capacity(traj.snapshots.len());
    let mut integrand = Vec::with_capacity(traj.snapshots.len());
    for s in &traj.snapshots {
        let (chi, dchi) = phi.time.eval(s.t);
        let pressure = s.field.map(|v| if v > 0.0 { v.powf(params.m - 1.0) } else { 0.0 })?;
        let w = plan.frac_gradient(&pressure, params.alpha - 1.0);
        let transport: f64 = (0..grid.d)
            .map(|j| {
                s.field
                    .values()
                    .iter()
                    .zip(w.component(j))
                    .zip(&grad[j])
                    .map(|((u, wj), gj)| u * wj * gj)
                    .sum::<f64>()
            })
            .sum::<f64>()
            * grid.cell_volume();
        times.push(s.t);
        integrand.push(dchi * s.field.dot(&psi) - chi * transport);
    }
    let first = &traj.snapshots[0];
    let last = &traj.snapshots[traj.snapshots.len() - 1];
    let boundary = phi.time.eval(first.t).0 * first.field.dot(&psi)
        - phi.time.eval(last.t).0 * last.field.dot(&psi);
    Ok(trapezoid(&times, &integrand) + boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::norms::sample_selfsim;
    use crate::grid::Grid;
    use crate::profiles::BarenblattSpec;
    use crate::solver::Snapshot;

    #[test]
    fn smooth_step_shape() {
        assert_eq!(smooth_step(-0.5), (1.0, 0.0));
        assert_eq!(smooth_step(1.5), (0.0, 0.0));
        let (v, _) = smooth_step(0.5);
        assert!((v - 0.5).abs() < 1e-15);
        let h = 1e-6;
        for s in [0.1, 0.4, 0.8] {
            let fd = (smooth_step(s + h).0 - smooth_step(s - h).0) / (2.0 * h);
            assert!((fd - smooth_step(s).1).abs() < 1e-6);
        }
    }

    fn exact(n: usize, count: usize, l: f64) -> (MediumParams, Trajectory) {
        let p = MediumParams::new(1, 2.0, 1.0).unwrap();
        let spec = BarenblattSpec::with_mass(p, 1.0).unwrap();
        let g = Grid::new(1, l, n).unwrap();
        let snaps = (0..=count)
            .map(|i| {
                let t = 1.0 + i as f64 / count as f64;
                Snapshot { t, field: sample_selfsim(&spec, t, g).unwrap() }
            })
            .collect();
        (p, Trajectory::from_snapshots(p, snaps).unwrap())
    }

    #[test]
    fn constant_test_function_gives_zero() {
        let (p, exact) = exact(256, 1, 8.0);
        let u0 = exact.snapshots[0].field.clone();
        let cfg = crate::solver::CauchyConfig::new(p, u0, 1.0, 2.0).with_snapshots(vec![1.0, 1.5, 2.0]);
        let traj = crate::solver::run(&cfg).unwrap();
        let phi = TestFunction {
            space: SpatialBump { center: vec![0.0], inner: 3.0, outer: 4.0 },
            time: TimeCutoff::Constant,
        };
        assert!(weak_residual(&traj, &p, &phi).unwrap().abs() < 1e-13);
    }

    #[test]
    fn exact_solution_residual_shrinks() {
        // the periodic velocity differs from the free-space one by O(L^{-2}),
        // so the box grows together with the resolution
        let phi = TestFunction {
            space: SpatialBump { center: vec![0.5], inner: 0.0, outer: 1.0 },
            time: TimeCutoff::Fade { start: 1.25, end: 1.75 },
        };
        let residual = |n, count, l| {
            let (p, t) = exact(n, count, l);
            weak_residual(&t, &p, &phi).unwrap().abs()
        };
        let coarse = residual(256, 50, 8.0);
        let fine = residual(4096, 200, 32.0);
        assert!(fine < coarse / 4.0, "{fine} vs {coarse}");
    }

    #[test]
    fn support_outside_box_is_rejected() {
        let (p, traj) = exact(256, 4, 8.0);
        let phi = TestFunction {
            space: SpatialBump { center: vec![6.0], inner: 0.0, outer: 3.0 },
            time: TimeCutoff::Constant,
        };
        assert!(weak_residual(&traj, &p, &phi).is_err());
    }
}
