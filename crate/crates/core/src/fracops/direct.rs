//! Direct quadrature of the singular-integral forms of `(−Δ)^{α/2}` and `I_β`.
//!
//! These are slow reference evaluations used to validate the spectral
//! operators and the closed forms. Integrals are written in polar
//! coordinates about the evaluation point `x`: an adaptive radial integral
//! along each direction, nested inside adaptive angular integrals. The polar
//! axis is aligned with `x − c` (with `c` the centre of the support ball), so
//! functions radial about `c` give azimuth-independent integrands.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::specfun::{frac_laplacian_constant, riesz_kernel_constant};

/// A bounded function on `ℝᵈ` vanishing outside a known ball.
pub struct CompactFn<'a> {
    center: Vec<f64>,
    radius: f64,
    f: Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>,
}

impl<'a> CompactFn<'a> {
    /// `f` must vanish outside the ball `|y − center| ≤ radius`; it is
    /// evaluated only inside it.
    pub fn new(center: Vec<f64>, radius: f64, f: impl Fn(&[f64]) -> f64 + Sync + 'a) -> Self {
        Self { center, radius, f: Box::new(f) }
    }

    /// `y ↦ profile(|y − center|)` for `|y − center| < radius`.
    pub fn radial(center: Vec<f64>, radius: f64, profile: impl Fn(f64) -> f64 + Sync + 'a) -> Self {
        let c = center.clone();
        Self::new(center, radius, move |y| profile(distance(y, &c)))
    }

    /// `(1 − |y|²)₊^{γ/2}` on `ℝᵈ`.
    pub fn unit_ball_power(d: usize, gamma: f64) -> Self {
        Self::radial(vec![0.0; d], 1.0, move |r| (1.0 - r * r).max(0.0).powf(gamma / 2.0))
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        if distance(y, &self.center) >= self.radius {
            0.0
        } else {
            (self.f)(y)
        }
    }

    /// The same function translated by `shift`.
    pub fn translated(&'a self, shift: &[f64]) -> CompactFn<'a> {
        let s = shift.to_vec();
        let center = self.center.iter().zip(&s).map(|(c, t)| c + t).collect();
        CompactFn::new(center, self.radius, move |y| {
            let back: Vec<f64> = y.iter().zip(&s).map(|(a, b)| a - b).collect();
            (self.f)(&back)
        })
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Orthonormal frame whose last vector is along `axis` (or the last
/// coordinate axis if `axis` is zero).
fn frame(axis: &[f64]) -> Vec<Vec<f64>> {
    let d = axis.len();
    let norm = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    let e_last: Vec<f64> = if norm > 0.0 {
        axis.iter().map(|v| v / norm).collect()
    } else {
        (0..d).map(|i| if i == d - 1 { 1.0 } else { 0.0 }).collect()
    };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    // Gram–Schmidt on the coordinate axes, starting from the least aligned
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| e_last[i].abs().total_cmp(&e_last[j].abs()));
    for &i in &order {
        if basis.len() == d - 1 {
            break;
        }
        let mut v: Vec<f64> = (0..d).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
        for b in basis.iter().chain(std::iter::once(&e_last)) {
            let p: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        basis.push(v);
    }
    basis.push(e_last);
    basis
}

/// Positive roots `ρ` of `|rel + ρθ| = radius`.
fn sphere_crossings(rel: &[f64], theta: &[f64], radius: f64, out: &mut Vec<f64>) {
    let b: f64 = rel.iter().zip(theta).map(|(r, t)| r * t).sum();
    let c: f64 = rel.iter().map(|r| r * r).sum::<f64>() - radius * radius;
    let disc = b * b - c;
    if disc <= 0.0 {
        return;
    }
    let sq = disc.sqrt();
    for root in [-b - sq, -b + sq] {
        if root > 0.0 {
            out.push(root);
        }
    }
}

struct PolarSetup {
    x: Vec<f64>,
    rel: Vec<f64>,
    dist: f64,
    basis: Vec<Vec<f64>>,
}

impl PolarSetup {
    fn new(f: &CompactFn<'_>, x: &[f64]) -> Self {
        let rel: Vec<f64> = x.iter().zip(f.center()).map(|(a, b)| a - b).collect();
        let dist = rel.iter().map(|v| v * v).sum::<f64>().sqrt();
        let basis = frame(&rel);
        Self { x: x.to_vec(), rel, dist, basis }
    }

    /// Unit direction from frame angles.
    fn direction(&self, angles: &[f64]) -> Vec<f64> {
        let d = self.x.len();
        let local: Vec<f64> = match d {
            1 => vec![angles[0]],
            2 => vec![angles[0].sin(), angles[0].cos()],
            _ => {
                let (th, ps) = (angles[0], angles[1]);
                vec![th.sin() * ps.cos(), th.sin() * ps.sin(), th.cos()]
            }
        };
        let mut out = vec![0.0; d];
        for (coef, b) in local.iter().zip(&self.basis) {
            out.iter_mut().zip(b).for_each(|(o, v)| *o += coef * v);
        }
        out
    }

    /// Polar angle of the tangent cone from `x` to the support ball, if `x` is outside it.
    fn tangent_angle(&self, radius: f64) -> Option<f64> {
        (self.dist > radius).then(|| (radius / self.dist).asin())
    }
}

fn tighter(opts: QuadOptions) -> QuadOptions {
    QuadOptions { abs_tol: opts.abs_tol * 0.1, rel_tol: opts.rel_tol * 0.1, ..opts }
}

/// Integrate `radial(direction)` over the unit sphere `S^{d−1}` (or a half of it
/// when `half` is set, for integrands even under `θ → −θ`).
fn sphere_integral(
    setup: &PolarSetup,
    half: bool,
    angular_breaks: &[f64],
    opts: QuadOptions,
    failed: &Cell<bool>,
    radial: &dyn Fn(&[f64]) -> f64,
) -> f64 {
    let d = setup.x.len();
    match d {
        1 => {
            let plus = radial(&setup.direction(&[1.0]));
            if half {
                plus
            } else {
                plus + radial(&setup.direction(&[-1.0]))
            }
        }
        2 => {
            // angle measured from the polar axis (last frame vector)
            let upper = if half { PI } else { 2.0 * PI };
            let mut breaks = angular_breaks.to_vec();
            breaks.extend(angular_breaks.iter().map(|a| 2.0 * PI - a));
            let r = integrate_with_breaks(|phi| radial(&setup.direction(&[phi])), 0.0, upper, &breaks, opts);
            failed.set(failed.get() || !r.converged);
            r.value
        }
        _ => {
            let upper = if half { 0.5 * PI } else { PI };
            let inner = tighter(opts);
            let r = integrate_with_breaks(
                |th| {
                    let r = integrate_with_breaks(
                        |ps| radial(&setup.direction(&[th, ps])),
                        0.0,
                        2.0 * PI,
                        &[],
                        inner,
                    );
                    failed.set(failed.get() || !r.converged);
                    r.value * th.sin()
                },
                0.0,
                upper,
                angular_breaks,
                opts,
            );
            failed.set(failed.get() || !r.converged);
            r.value
        }
    }
}

/// Ratio of the quadratic-model cut-off to the distance to the nearest kink.
const QUADRATIC_CORE: f64 = 1e-3;

/// `(−Δ)^{α/2} f(x)` by direct quadrature of
/// `c_{d,α} ∫ (f(x) − (f(x+z) + f(x−z))/2) |z|^{−d−α} dz`.
///
/// Near `z = 0` the second difference is replaced by its quadratic model
/// (requires `f ∈ C²` around `x`); beyond the support the integrand is
/// `f(x)|z|^{−d−α}` and is integrated analytically.
pub fn frac_laplacian_quadrature(
    f: &CompactFn<'_>,
    x: &[f64],
    alpha: f64,
    opts: QuadOptions,
) -> Result<f64> {
    let d = f.dim();
    ensure!(alpha > 0.0 && alpha < 2.0, Domain, "alpha = {alpha} outside (0, 2)");
    ensure!((1..=3).contains(&d), Domain, "quadrature supports d = 1, 2, 3, got {d}");
    ensure!(x.len() == d, Domain, "point has {} coordinates, expected {d}", x.len());
    let c = frac_laplacian_constant(d, alpha)?;
    let setup = PolarSetup::new(f, x);
    let fx = f.eval(x);
    let rho_out = setup.dist + f.radius();
    let failed = Cell::new(false);
    let radial_opts = tighter(opts);

    let radial = |theta: &[f64]| -> f64 {
        let mut breaks = Vec::with_capacity(4);
        sphere_crossings(&setup.rel, theta, f.radius(), &mut breaks);
        let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
        sphere_crossings(&setup.rel, &neg, f.radius(), &mut breaks);
        let first = breaks.iter().copied().fold(rho_out, f64::min);
        let core = QUADRATIC_CORE * first.min(f.radius());
        let second_diff = |rho: f64| {
            let plus: Vec<f64> = x.iter().zip(theta).map(|(a, t)| a + rho * t).collect();
            let minus: Vec<f64> = x.iter().zip(theta).map(|(a, t)| a - rho * t).collect();
            fx - 0.5 * (f.eval(&plus) + f.eval(&minus))
        };
        // ∫₀^core (g(core)(ρ/core)²) ρ^{−1−α} dρ
        let core_part = second_diff(core) / (core * core) * core.powf(2.0 - alpha) / (2.0 - alpha);
        let r = integrate_with_breaks(
            |rho| second_diff(rho) * rho.powf(-1.0 - alpha),
            core,
            rho_out,
            &breaks,
            radial_opts,
        );
        failed.set(failed.get() || !r.converged);
        core_part + r.value + fx * rho_out.powf(-alpha) / alpha
    };

    let breaks: Vec<f64> = match setup.tangent_angle(f.radius()) {
        Some(a) => vec![a, PI - a],
        None => vec![],
    };
    let total = sphere_integral(&setup, true, &breaks, opts, &failed, &radial);
    if failed.get() {
        return Err(Error::Quadrature(format!(
            "fractional Laplacian at {x:?} with alpha = {alpha}"
        )));
    }
    Ok(2.0 * c * total)
}

/// `I_β f(x) = C_β ∫ f(x+z) |z|^{β−d} dz` by direct quadrature with the
/// positive kernel normalised so that `I_β = (−Δ)^{−β/2}`.
pub fn riesz_quadrature(f: &CompactFn<'_>, x: &[f64], beta: f64, opts: QuadOptions) -> Result<f64> {
    let d = f.dim();
    ensure!((1..=3).contains(&d), Domain, "quadrature supports d = 1, 2, 3, got {d}");
    ensure!(x.len() == d, Domain, "point has {} coordinates, expected {d}", x.len());
    let c = riesz_kernel_constant(d, beta)?;
    let setup = PolarSetup::new(f, x);
    let failed = Cell::new(false);
    let radial_opts = tighter(opts);

    let radial = |theta: &[f64]| -> f64 {
        let mut crossings = Vec::with_capacity(2);
        sphere_crossings(&setup.rel, theta, f.radius(), &mut crossings);
        let inside = setup.dist < f.radius();
        let (lo, hi) = match (inside, crossings.as_slice()) {
            (true, [.., hi]) => (0.0, *hi),
            (false, [lo, hi]) => (*lo, *hi),
            _ => return 0.0,
        };
        // ρ = s^{1/β} turns ρ^{β−1} dρ into ds/β
        let inv = 1.0 / beta;
        let r = integrate_with_breaks(
            |s| {
                let rho = s.powf(inv);
                let y: Vec<f64> = x.iter().zip(theta).map(|(a, t)| a + rho * t).collect();
                f.eval(&y)
            },
            lo.powf(beta),
            hi.powf(beta),
            &[],
            radial_opts,
        );
        failed.set(failed.get() || !r.converged);
        r.value * inv
    };

    let breaks: Vec<f64> = setup.tangent_angle(f.radius()).map(|a| PI - a).into_iter().collect();
    let total = sphere_integral(&setup, false, &breaks, opts, &failed, &radial);
    if failed.get() {
        return Err(Error::Quadrature(format!("Riesz potential at {x:?} with beta = {beta}")));
    }
    Ok(c * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_orthonormal() {
        for axis in [vec![0.3, -0.2, 0.9], vec![0.0, 0.0, 0.0], vec![1.0, 0.0]] {
            let b = frame(&axis);
            for i in 0..b.len() {
                for j in 0..b.len() {
                    let dot: f64 = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expected).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn getoor_value_at_origin_d1() {
        let f = CompactFn::unit_ball_power(1, 1.0);
        let v = frac_laplacian_quadrature(&f, &[0.0], 1.0, QuadOptions::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn riesz_at_origin_d3() {
        let f = CompactFn::unit_ball_power(3, 1.0);
        let v = riesz_quadrature(&f, &[0.0, 0.0, 0.0], 1.0, QuadOptions::default()).unwrap();
        assert!((v - 0.5).abs() < 1e-6, "{v}");
    }

    #[test]
    fn riesz_nonnegative_and_domain() {
        let f = CompactFn::unit_ball_power(2, 1.0);
        let v = riesz_quadrature(&f, &[1.7, -0.4], 0.7, QuadOptions::default()).unwrap();
        assert!(v > 0.0);
        assert!(riesz_quadrature(&f, &[0.0, 0.0], 2.0, QuadOptions::default()).is_err());
        assert!(frac_laplacian_quadrature(&f, &[0.0, 0.0], 2.0, QuadOptions::default()).is_err());
    }
}
