//! Cauchy-problem integrator.
//!
//! The equation is stepped as a conservative transport law `∂ₜu = ∇·(u w)`
//! with `w = ∇^{α−1}(u^{m−1})`. The velocity is evaluated spectrally; the
//! transport step is first-order upwind finite volume with explicit Euler in
//! time, which keeps the update positive under CFL and conserves the discrete
//! mass exactly. An optional viscosity `εΔu` is applied either through the
//! exact heat factor (default) or explicitly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::diagnostics::norms::{lp_norm_index, support_radius, NormIndex, SUPPORT_THRESHOLD};
use crate::error::{ensure, Error, Result};
use crate::fracops::SpectralPlan;
use crate::grid::{Field, Grid, VectorField};
use crate::specfun::MediumParams;

/// Values below this are clipped to zero after each step.
pub const CLIP_FLOOR: f64 = -1e-14;

/// Blow-up guard: abort once `‖u‖_∞` exceeds this multiple of its initial value.
pub const BLOWUP_FACTOR: f64 = 1e6;

/// How the viscosity term is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffusionScheme {
    /// Multiply by `exp(−ε dt |ξ|²)`; unconditionally stable.
    #[default]
    ExactSpectral,
    /// Forward Euler on the spectral Laplacian; adds the `h²/(π²dε)` step cap.
    Explicit,
}

#[derive(Debug, Clone)]
pub struct CauchyConfig {
    pub params: MediumParams,
    pub grid: Grid,
    pub u0: Field,
    pub t0: f64,
    pub t_end: f64,
    pub cfl: f64,
    pub epsilon: f64,
    pub diffusion: DiffusionScheme,
    pub snapshot_times: Vec<f64>,
}

impl CauchyConfig {
    /// Config with `cfl = 1`, no viscosity and no snapshots.
    pub fn new(params: MediumParams, u0: Field, t0: f64, t_end: f64) -> Self {
        Self {
            params,
            grid: *u0.grid(),
            u0,
            t0,
            t_end,
            cfl: 1.0,
            epsilon: 0.0,
            diffusion: DiffusionScheme::default(),
            snapshot_times: Vec::new(),
        }
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn with_viscosity(mut self, epsilon: f64, scheme: DiffusionScheme) -> Self {
        self.epsilon = epsilon;
        self.diffusion = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        ensure!(
            self.params.d == self.grid.d,
            InvalidParams,
            "medium dimension {} differs from grid dimension {}",
            self.params.d,
            self.grid.d
        );
        ensure!(*self.u0.grid() == self.grid, InvalidParams, "initial field lives on another grid");
        ensure!(self.t0.is_finite() && self.t0 > 0.0, InvalidParams, "t0 must be positive, got {}", self.t0);
        ensure!(
            self.t_end.is_finite() && self.t_end >= self.t0,
            InvalidParams,
            "t_end = {} precedes t0 = {}",
            self.t_end,
            self.t0
        );
        ensure!(self.cfl > 0.0 && self.cfl <= 1.0, InvalidParams, "cfl must lie in (0, 1], got {}", self.cfl);
        ensure!(
            self.epsilon.is_finite() && self.epsilon >= 0.0,
            InvalidParams,
            "epsilon must be nonnegative, got {}",
            self.epsilon
        );
        let mut prev = self.t0;
        for &s in &self.snapshot_times {
            ensure!(
                s >= prev && s <= self.t_end,
                InvalidParams,
                "snapshot times must ascend within [t0, t_end], got {s}"
            );
            prev = s;
        }
        if let Some(v) = self.u0.values().iter().find(|v| **v < 0.0) {
            return Err(Error::InvalidParams(format!("initial data must be nonnegative, found {v}")));
        }
        let limit = self.grid.half_width / 4.0;
        let g = &self.grid;
        for (k, v) in self.u0.values().iter().enumerate() {
            if *v > 0.0 {
                let p = g.point(k);
                let r = p[..g.d].iter().map(|x| x * x).sum::<f64>().sqrt();
                ensure!(
                    r <= limit,
                    InvalidParams,
                    "initial support reaches |x| = {r}, beyond L/4 = {limit}"
                );
            }
        }
        Ok(())
    }
}

/// One row of the per-step time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub mass: f64,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub support_radius: f64,
    /// Step that produced this row; zero for the initial row.
    pub dt: f64,
}

impl SeriesRow {
    fn measure(u: &Field, t: f64, dt: f64) -> Self {
        Self {
            t,
            mass: u.integral(),
            l1: lp_norm_index(u, NormIndex::Finite(1.0)),
            l2: lp_norm_index(u, NormIndex::Finite(2.0)),
            linf: u.max_abs(),
            support_radius: support_radius(u, SUPPORT_THRESHOLD).unwrap_or(0.0),
            dt,
        }
    }

    pub const CSV_HEADER: &'static str = "t,mass,l1,l2,linf,support_radius,dt";

    pub fn csv(&self) -> String {
        format!(
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            self.t, self.mass, self.l1, self.l2, self.linf, self.support_radius, self.dt
        )
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub field: Field,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: MediumParams,
    pub snapshots: Vec<Snapshot>,
    pub series: Vec<SeriesRow>,
    pub steps: usize,
    /// `Σ|clipped values|·hᵈ` over the whole run.
    pub clipped_mass: f64,
    /// Most negative value produced by any step before clipping, relative to `‖u‖_∞`.
    pub worst_relative_min: f64,
}

impl Trajectory {
    /// Trajectory built from given snapshots (e.g. an exact solution sampled
    /// on the grid); one series row per snapshot.
    pub fn from_snapshots(params: MediumParams, snapshots: Vec<Snapshot>) -> Result<Self> {
        ensure!(!snapshots.is_empty(), InsufficientData, "no snapshots");
        ensure!(
            snapshots.windows(2).all(|w| w[1].t > w[0].t),
            InvalidParams,
            "snapshot times must increase"
        );
        let series = snapshots
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let dt = if i == 0 { 0.0 } else { s.t - snapshots[i - 1].t };
                SeriesRow::measure(&s.field, s.t, dt)
            })
            .collect();
        Ok(Self {
            params,
            steps: snapshots.len() - 1,
            snapshots,
            series,
            clipped_mass: 0.0,
            worst_relative_min: 0.0,
        })
    }

    pub fn final_snapshot(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    /// Snapshot recorded at `t`, if any.
    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-12 * t.abs().max(1.0))
    }

    /// Largest relative deviation of the mass column from its first entry.
    pub fn mass_drift(&self) -> f64 {
        let Some(first) = self.series.first() else { return 0.0 };
        if first.mass == 0.0 {
            return self.series.iter().fold(0.0, |m, r| m.max(r.mass.abs()));
        }
        self.series.iter().fold(0.0, |m, r| m.max(((r.mass - first.mass) / first.mass).abs()))
    }
}

/// Velocity field `w = ∇^{α−1}(max(u, 0)^{m−1})`.
pub fn compute_velocity(u: &Field, p: &MediumParams) -> VectorField {
    velocity_with(&SpectralPlan::new(*u.grid()), u, p)
}

fn pressure(u: &Field, m: f64) -> Field {
    let values = u.values().iter().map(|&v| if v > 0.0 { v.powf(m - 1.0) } else { 0.0 }).collect();
    Field::from_vec_unchecked(*u.grid(), values)
}

fn velocity_with(plan: &SpectralPlan, u: &Field, p: &MediumParams) -> VectorField {
    plan.frac_gradient(&pressure(u, p.m), p.alpha - 1.0)
}

/// Largest stable step: `cfl·h / Σ_j max|w_j|`, capped by `cfl·h²/(π²dε)` for
/// explicit viscosity. Infinite when nothing limits it.
///
/// The spectral Laplacian reaches `dπ²/h²` at the Nyquist corner, not the
/// `4d/h²` of the three-point stencil, so the usual `h²/(2dε)` would let the
/// highest mode flip sign.
pub fn stable_dt(w: &VectorField, cfl: f64, epsilon: f64, scheme: DiffusionScheme) -> f64 {
    let g = w.grid();
    let h = g.spacing();
    let speed: f64 = w
        .components()
        .iter()
        .map(|c| c.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
        .sum();
    let mut dt = if speed > 0.0 { cfl * h / speed } else { f64::INFINITY };
    if scheme == DiffusionScheme::Explicit && epsilon > 0.0 {
        dt = dt.min(cfl * h * h / (PI * PI * g.d as f64 * epsilon));
    }
    dt
}

/// Upwind flux divergence along one axis, accumulated into `out`.
fn transport_axis(u: &[f64], w: &[f64], grid: &Grid, axis: usize, scale: f64, out: &mut [f64]) {
    let n = grid.n;
    let (stride, lines) = match (grid.d, axis) {
        (1, _) => (1, 1),
        (_, 0) => (n, n),
        _ => (1, n),
    };
    let line_start = |l: usize| if grid.d == 2 && axis == 0 { l } else { l * n };
    let mut flux = vec![0.0; n];
    for l in 0..lines {
        let base = line_start(l);
        let at = |i: usize| base + (i % n) * stride;
        // flux[i] lives on the face between cells i and i+1
        for (i, f) in flux.iter_mut().enumerate() {
            let (a, b) = (at(i), at(i + 1));
            let wf = 0.5 * (w[a] + w[b]);
            let up = if wf < 0.0 {
                u[a]
            } else if wf > 0.0 {
                u[b]
            } else {
                0.5 * (u[a] + u[b])
            };
            *f = wf * up;
        }
        for i in 0..n {
            out[at(i)] += scale * (flux[i] - flux[(i + n - 1) % n]);
        }
    }
}

fn step_with(
    plan: &SpectralPlan,
    u: &Field,
    w: &VectorField,
    dt: f64,
    epsilon: f64,
    scheme: DiffusionScheme,
) -> Field {
    let g = *u.grid();
    let mut next = u.values().to_vec();
    let scale = dt / g.spacing();
    for axis in 0..g.d {
        transport_axis(u.values(), w.component(axis), &g, axis, scale, &mut next);
    }
    let next = Field::from_vec_unchecked(g, next);
    if epsilon == 0.0 {
        return next;
    }
    match scheme {
        DiffusionScheme::ExactSpectral => plan.heat(&next, epsilon * dt),
        DiffusionScheme::Explicit => {
            let lap = plan.frac_laplacian(u, 2.0);
            let values = next.values().iter().zip(lap.values()).map(|(v, l)| v - dt * epsilon * l).collect();
            Field::from_vec_unchecked(g, values)
        }
    }
}

/// One explicit step `u + dt·∇·(u w)` plus viscosity. Rejects steps above the
/// stable limit with `cfl = 1`.
pub fn step(
    u: &Field,
    w: &VectorField,
    dt: f64,
    epsilon: f64,
    scheme: DiffusionScheme,
) -> Result<Field> {
    ensure!(w.grid() == u.grid(), InvalidParams, "velocity lives on another grid");
    ensure!(dt >= 0.0 && dt.is_finite(), InvalidParams, "dt must be finite and nonnegative, got {dt}");
    let stable = stable_dt(w, 1.0, epsilon, scheme);
    if dt > stable * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, stable });
    }
    Ok(step_with(&SpectralPlan::new(*u.grid()), u, w, dt, epsilon, scheme))
}

/// Integrate from `t0` to `t_end`.
///
/// Steps are never shortened for snapshots, only for the final landing on
/// `t_end`: a shortened upwind step is more diffusive, and dense snapshot
/// lists would otherwise smear the front. A snapshot falling inside a step
/// is the linear interpolant of the two bracketing states, which keeps it
/// nonnegative and mass-conserving.
pub fn run(cfg: &CauchyConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let plan = SpectralPlan::new(cfg.grid);
    let mut u = cfg.u0.clone();
    let mut t = cfg.t0;
    let initial_sup = u.max_abs();
    let limit = BLOWUP_FACTOR * initial_sup;
    let cell = cfg.grid.cell_volume();

    let mut traj = Trajectory {
        params: cfg.params,
        snapshots: Vec::new(),
        series: vec![SeriesRow::measure(&u, t, 0.0)],
        steps: 0,
        clipped_mass: 0.0,
        worst_relative_min: 0.0,
    };
    let mut pending = cfg.snapshot_times.iter().copied().peekable();
    while pending.peek().is_some_and(|&s| s <= t) {
        pending.next();
        traj.snapshots.push(Snapshot { t, field: u.clone() });
    }

    while t < cfg.t_end {
        let w = velocity_with(&plan, &u, &cfg.params);
        let mut dt = stable_dt(&w, cfg.cfl, cfg.epsilon, cfg.diffusion);
        let lands = dt >= cfg.t_end - t;
        if lands {
            dt = cfg.t_end - t;
        }
        let raw = step_with(&plan, &u, &w, dt, cfg.epsilon, cfg.diffusion);
        let sup = raw.max_abs();
        let mut values = raw.into_values();
        let mut clipped = 0.0;
        for v in values.iter_mut() {
            if sup > 0.0 {
                traj.worst_relative_min = traj.worst_relative_min.min(*v / sup);
            }
            if *v < CLIP_FLOOR {
                clipped += -*v;
                *v = 0.0;
            }
        }
        if clipped > 0.0 {
            log::debug!("t = {t}: clipped {:e} of negative mass", clipped * cell);
            traj.clipped_mass += clipped * cell;
        }
        let next = Field::new(cfg.grid, values)?;
        let t_next = if lands { cfg.t_end } else { t + dt };
        traj.steps += 1;

        if initial_sup > 0.0 && sup > limit {
            return Err(Error::BlowUp { t: t_next, sup, limit });
        }
        while let Some(s) = pending.next_if(|&s| s <= t_next) {
            let field = if s >= t_next {
                next.clone()
            } else {
                let theta = (s - t) / (t_next - t);
                let mixed = u.values().iter().zip(next.values()).map(|(a, b)| a + theta * (b - a)).collect();
                Field::from_vec_unchecked(cfg.grid, mixed)
            };
            traj.snapshots.push(Snapshot { t: s, field });
        }
        u = next;
        t = t_next;
        traj.series.push(SeriesRow::measure(&u, t, dt));
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::norms::{relative_l1_error, sample_selfsim};
    use crate::profiles::BarenblattSpec;

    fn benchmark(n: usize, alpha: f64) -> (BarenblattSpec, CauchyConfig) {
        let p = MediumParams::new(1, 2.0, alpha).unwrap();
        let spec = BarenblattSpec::with_mass(p, 1.0).unwrap();
        let g = Grid::new(1, 8.0, n).unwrap();
        let u0 = sample_selfsim(&spec, 1.0, g).unwrap();
        (spec, CauchyConfig::new(p, u0, 1.0, 2.0).with_snapshots(vec![1.5, 2.0]))
    }

    #[test]
    fn zero_velocity_leaves_data_unchanged() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let u = Field::from_fn(g, |x| (-x[0] * x[0]).exp()).unwrap();
        let w = VectorField::zeros(g);
        assert_eq!(stable_dt(&w, 0.5, 0.0, DiffusionScheme::ExactSpectral), f64::INFINITY);
        let out = step(&u, &w, 0.3, 0.0, DiffusionScheme::ExactSpectral).unwrap();
        assert_eq!(out, u);
    }

    #[test]
    fn constant_gives_zero_velocity() {
        let g = Grid::new(2, 4.0, 16).unwrap();
        let u = Field::from_fn(g, |_| 0.7).unwrap();
        let p = MediumParams::new(2, 2.5, 1.2).unwrap();
        assert!(compute_velocity(&u, &p).max_abs() < 1e-14);
    }

    #[test]
    fn dt_scales_inversely_with_speed() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let w1 = VectorField::new(g, vec![vec![0.5; 64]]).unwrap();
        let w2 = VectorField::new(g, vec![vec![1.0; 64]]).unwrap();
        let a = stable_dt(&w1, 0.8, 0.0, DiffusionScheme::ExactSpectral);
        let b = stable_dt(&w2, 0.8, 0.0, DiffusionScheme::ExactSpectral);
        assert!((a - 2.0 * b).abs() < 1e-15);
        let c = stable_dt(&w2, 0.8, 10.0, DiffusionScheme::Explicit);
        let h = g.spacing();
        assert!((c - 0.8 * h * h / (10.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn oversized_step_is_rejected() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let u = Field::zeros(g);
        let w = VectorField::new(g, vec![vec![1.0; 64]]).unwrap();
        let err = step(&u, &w, 1.0, 0.0, DiffusionScheme::ExactSpectral).unwrap_err();
        assert!(matches!(err, Error::Cfl { .. }));
    }

    #[test]
    fn single_step_conserves_sum() {
        let g = Grid::new(2, 4.0, 32).unwrap();
        let u = Field::from_fn(g, |x| (1.0 - x[0] * x[0] - x[1] * x[1]).max(0.0)).unwrap();
        let p = MediumParams::new(2, 2.0, 1.3).unwrap();
        let w = compute_velocity(&u, &p);
        let dt = stable_dt(&w, 1.0, 0.0, DiffusionScheme::ExactSpectral);
        for eps in [0.0, 0.05] {
            let out = step(&u, &w, dt, eps, DiffusionScheme::ExactSpectral).unwrap();
            let before: f64 = u.values().iter().sum();
            let after: f64 = out.values().iter().sum();
            assert!(((after - before) / before).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let p = MediumParams::new(1, 2.0, 1.0).unwrap();
        let cfg = CauchyConfig::new(p, Field::zeros(g), 1.0, 3.0).with_snapshots(vec![2.0, 3.0]);
        let traj = run(&cfg).unwrap();
        assert_eq!(traj.snapshots.len(), 2);
        assert!(traj.snapshots.iter().all(|s| s.field.max_abs() == 0.0));
        assert_eq!(traj.snapshots[1].t, 3.0);
    }

    #[test]
    fn config_validation() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let p = MediumParams::new(1, 2.0, 1.0).unwrap();
        let wide = Field::from_fn(g, |x| if x[0].abs() < 1.5 { 1.0 } else { 0.0 }).unwrap();
        assert!(run(&CauchyConfig::new(p, wide, 1.0, 2.0)).is_err());
        let neg = Field::from_fn(g, |x| if x[0].abs() < 0.5 { -1.0 } else { 0.0 }).unwrap();
        assert!(run(&CauchyConfig::new(p, neg, 1.0, 2.0)).is_err());
        let ok = Field::zeros(g);
        assert!(run(&CauchyConfig::new(p, ok.clone(), 2.0, 1.0)).is_err());
        assert!(run(&CauchyConfig::new(p, ok.clone(), 1.0, 2.0).with_cfl(1.5)).is_err());
        assert!(run(&CauchyConfig::new(p, ok, 1.0, 2.0).with_snapshots(vec![3.0])).is_err());
    }

    #[test]
    fn zero_length_run_returns_initial_data() {
        let (_, cfg) = benchmark(256, 1.0);
        let cfg = CauchyConfig { t_end: 1.0, snapshot_times: vec![1.0], ..cfg };
        let traj = run(&cfg).unwrap();
        assert_eq!(traj.steps, 0);
        assert_eq!(traj.snapshots[0].field, cfg.u0);
    }

    #[test]
    fn coarse_benchmark_tracks_exact_solution() {
        let (spec, cfg) = benchmark(512, 1.0);
        let traj = run(&cfg).unwrap();
        assert!(traj.mass_drift() < 1e-10);
        assert!(traj.worst_relative_min >= -1e-12);
        let last = traj.final_snapshot().unwrap();
        assert_eq!(last.t, 2.0);
        let err = relative_l1_error(&last.field, &spec, 2.0).unwrap();
        assert!(err < 5e-2, "relative L1 error {err}");
    }
}
