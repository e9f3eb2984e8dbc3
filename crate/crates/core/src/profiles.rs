//! Compactly supported self-similar solutions
//!
//! ```text
//! u(t, x) = t^{−dλ} Φ(x t^{−λ}),   Φ(y) = (k (R² − |y|²)₊^{α/2})^{1/(m−1)}
//! ```
//!
//! with `λ = 1/(d(m−1)+α)` and `k = dλ K_{α,d}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::specfun::{barenblatt_k, gamma_fn, lambda_exponent, MediumParams};

/// Self-similar profile with support radius `R` in the similarity variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarenblattSpec {
    pub params: MediumParams,
    pub radius: f64,
    k: f64,
}

impl BarenblattSpec {
    pub fn new(params: MediumParams, radius: f64) -> Result<Self> {
        params.validate()?;
        ensure!(
            radius.is_finite() && radius > 0.0,
            InvalidParams,
            "support radius must be positive, got {radius}"
        );
        Ok(Self { params, radius, k: barenblatt_k(&params)? })
    }

    /// Profile carrying total mass `mass`.
    pub fn with_mass(params: MediumParams, mass: f64) -> Result<Self> {
        Self::new(params, radius_for_mass(&params, mass)?)
    }

    /// Profile amplitude `k`.
    pub fn amplitude(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        lambda_exponent(&self.params)
    }

    /// Interface radius `R t^λ` at time `t`.
    pub fn support_radius_at(&self, t: f64) -> f64 {
        self.radius * t.powf(self.lambda())
    }

    /// Exponent `1/(m−1)` and the base value `k (R² − |y|²)^{α/2}`.
    fn base(&self, r2: f64) -> f64 {
        let gap = self.radius * self.radius - r2;
        if gap <= 0.0 {
            0.0
        } else {
            self.k * gap.powf(0.5 * self.params.alpha)
        }
    }

    /// `Φ` as a function of `|y|²`.
    pub fn phi_of_r2(&self, r2: f64) -> f64 {
        let b = self.base(r2);
        if b == 0.0 {
            0.0
        } else {
            b.powf(1.0 / (self.params.m - 1.0))
        }
    }
}

fn norm2(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum()
}

/// `Φ(y)`; zero on and outside the interface `|y| = R`.
pub fn phi_value(spec: &BarenblattSpec, y: &[f64]) -> f64 {
    spec.phi_of_r2(norm2(y))
}

/// `u(t, x) = t^{−dλ} Φ(x t^{−λ})`.
pub fn selfsim_value(spec: &BarenblattSpec, t: f64, x: &[f64]) -> Result<f64> {
    ensure!(t > 0.0 && t.is_finite(), InvalidParams, "time must be positive, got {t}");
    let lam = spec.lambda();
    let d = spec.params.d as f64;
    let scale = t.powf(-lam);
    Ok(t.powf(-d * lam) * spec.phi_of_r2(norm2(x) * scale * scale))
}

/// `∫ Φ^q` for the unit-radius profile:
/// `k^{q/(m−1)} π^{d/2} Γ(s+1)/Γ(s+1+d/2)` with `s = qα/(2(m−1))`.
fn unit_power_integral(p: &MediumParams, q: f64) -> Result<f64> {
    let k = barenblatt_k(p)?;
    let s = q * p.alpha / (2.0 * (p.m - 1.0));
    let d = p.d as f64;
    Ok(k.powf(q / (p.m - 1.0)) * PI.powf(d / 2.0) * gamma_fn(s + 1.0)? / gamma_fn(s + 1.0 + d / 2.0)?)
}

fn unit_mass(p: &MediumParams) -> Result<f64> {
    unit_power_integral(p, 1.0)
}

/// Mass exponent: `∫Φ` scales as `R^{d + α/(m−1)}`.
fn mass_exponent(p: &MediumParams) -> f64 {
    p.d as f64 + p.alpha / (p.m - 1.0)
}

/// `∫_{ℝᵈ} Φ dy` in closed form.
pub fn profile_mass(spec: &BarenblattSpec) -> Result<f64> {
    Ok(unit_mass(&spec.params)? * spec.radius.powf(mass_exponent(&spec.params)))
}

/// `‖Φ‖_q` in closed form, `q ≥ 1` or `q = ∞`.
pub fn profile_lp_norm(spec: &BarenblattSpec, q: f64) -> Result<f64> {
    ensure!(q >= 1.0, Domain, "norm index must be >= 1, got {q}");
    if q.is_infinite() {
        return Ok(spec.phi_of_r2(0.0));
    }
    let p = &spec.params;
    let exponent = p.d as f64 + q * p.alpha / (p.m - 1.0);
    Ok((unit_power_integral(p, q)? * spec.radius.powf(exponent)).powf(1.0 / q))
}

/// `‖u(t)‖_q = t^{−dλ(1−1/q)} ‖Φ‖_q`.
pub fn selfsim_lp_norm(spec: &BarenblattSpec, t: f64, q: f64) -> Result<f64> {
    ensure!(t > 0.0 && t.is_finite(), InvalidParams, "time must be positive, got {t}");
    let d = spec.params.d as f64;
    let inv = if q.is_infinite() { 0.0 } else { 1.0 / q };
    Ok(t.powf(-d * spec.lambda() * (1.0 - inv)) * profile_lp_norm(spec, q)?)
}

/// The unique `R` with `profile_mass = mass`.
pub fn radius_for_mass(p: &MediumParams, mass: f64) -> Result<f64> {
    p.validate()?;
    ensure!(mass.is_finite() && mass > 0.0, InvalidParams, "mass must be positive, got {mass}");
    Ok((mass / unit_mass(p)?).powf(1.0 / mass_exponent(p)))
}

/// `∇^{α−1}(u^{m−1})(t, x) = −λx/t`, valid strictly inside the support.
pub fn exact_velocity(spec: &BarenblattSpec, t: f64, x: &[f64]) -> Result<Vec<f64>> {
    ensure!(t > 0.0 && t.is_finite(), InvalidParams, "time must be positive, got {t}");
    let front = spec.support_radius_at(t);
    let r = norm2(x).sqrt();
    if r >= front {
        return Err(Error::Domain(format!(
            "|x| = {r} is outside the support radius {front} at t = {t}"
        )));
    }
    let lam = spec.lambda();
    Ok(x.iter().map(|v| -lam * v / t).collect())
}

/// Hölder exponent `min{α/(2(m−1)), 1}` of the profile at the interface.
pub fn holder_exponent(p: &MediumParams) -> f64 {
    (p.alpha / (2.0 * (p.m - 1.0))).min(1.0)
}
