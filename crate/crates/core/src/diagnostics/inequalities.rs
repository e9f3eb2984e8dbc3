//! Numerical audits of the functional inequalities behind the decay estimate.
//!
//! All integrals use grid quadrature and the spectral operators; `∇^{α/2}`
//! is the vector multiplier `iξ|ξ|^{α/2−1}`. Audit fields are smooth
//! nonnegative Gaussian mixtures whose spectra are negligible beyond the
//! lowest `n/4` modes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::decay::{gn_exponents, GnExponents};
use super::norms::lp_norm;
use crate::error::{ensure, Result};
use crate::fracops::SpectralPlan;
use crate::grid::{Field, Grid};
use crate::specfun::MediumParams;

/// Narrowest mixture component, in grid spacings.
pub const MIN_WIDTH_CELLS: f64 = 8.0;

/// A smooth nonnegative Gaussian mixture: 1 to 4 components with centres in
/// `|x_j| ≤ L/4` and widths in `[8h, L/12]`.
pub fn random_audit_field(grid: Grid, rng: &mut impl Rng) -> Result<Field> {
    let h = grid.spacing();
    let l = grid.half_width;
    let (lo, hi) = (MIN_WIDTH_CELLS * h, l / 12.0);
    ensure!(lo < hi, InvalidParams, "grid too coarse for audit fields: 8h = {lo} >= L/12 = {hi}");
    let count = rng.gen_range(1..=4);
    let bumps: Vec<(f64, [f64; 2], f64)> = (0..count)
        .map(|_| {
            let weight = rng.gen_range(0.2..1.0);
            let c = [rng.gen_range(-l / 4.0..l / 4.0), rng.gen_range(-l / 4.0..l / 4.0)];
            (weight, c, rng.gen_range(lo..hi))
        })
        .collect();
    Field::from_fn(grid, |x| {
        bumps
            .iter()
            .map(|(w, c, s)| {
                let r2: f64 = x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
                w * (-0.5 * r2 / (s * s)).exp()
            })
            .sum()
    })
}

/// `trials` audit fields from a ChaCha stream seeded with `seed`.
pub fn audit_fields(grid: Grid, trials: usize, seed: u64) -> Result<Vec<Field>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| random_audit_field(grid, &mut rng)).collect()
}

/// `‖∇^{α/2} g‖₂²`.
fn dirichlet_energy(plan: &SpectralPlan, g: &Field, alpha: f64) -> f64 {
    plan.frac_gradient(g, alpha / 2.0).squared_norm()
}

/// Both sides of the Stroock–Varopoulos inequality
/// `∫|w|^{q−2}w (−Δ)^{α/2}w ≥ 4(q−1)/q² ‖∇^{α/2}|w|^{q/2}‖₂²`.
pub fn stroock_varopoulos_sides(w: &Field, alpha: f64, q: f64) -> Result<(f64, f64)> {
    ensure!(alpha > 0.0 && alpha <= 2.0, Domain, "alpha = {alpha} outside (0, 2]");
    ensure!(q >= 1.0, Domain, "q must be >= 1, got {q}");
    let plan = SpectralPlan::new(*w.grid());
    let lw = plan.frac_laplacian(w, alpha);
    let weight = w.map(|v| if v == 0.0 { 0.0 } else { v.abs().powf(q - 2.0) * v })?;
    let lhs = weight.dot(&lw);
    let half = w.map(|v| v.abs().powf(q / 2.0))?;
    let rhs = 4.0 * (q - 1.0) / (q * q) * dirichlet_energy(&plan, &half, alpha);
    Ok((lhs, rhs))
}

/// `LHS − RHS` of the Stroock–Varopoulos inequality.
pub fn check_stroock_varopoulos(w: &Field, alpha: f64, q: f64) -> Result<f64> {
    let (lhs, rhs) = stroock_varopoulos_sides(w, alpha, q)?;
    Ok(lhs - rhs)
}

/// Nash ratio `‖v‖₂^{2(1+α/d)} / (‖∇^{α/2}v‖₂² ‖v‖₁^{2α/d})`.
pub fn check_nash(v: &Field, alpha: f64) -> Result<f64> {
    ensure!(alpha > 0.0 && alpha <= 2.0, Domain, "alpha = {alpha} outside (0, 2]");
    ensure!(v.max_abs() > 0.0, Domain, "Nash ratio of the zero field");
    let d = v.grid().d as f64;
    let energy = dirichlet_energy(&SpectralPlan::new(*v.grid()), v, alpha);
    ensure!(energy > 0.0, Domain, "field has no non-constant modes");
    let l2 = lp_norm(v, 2.0)?;
    let l1 = lp_norm(v, 1.0)?;
    Ok(l2.powf(2.0 * (1.0 + alpha / d)) / (energy * l1.powf(2.0 * alpha / d)))
}

/// Both sides of `‖u‖_p^a ≤ C_N ‖∇^{α/2}u^{r/2}‖₂² ‖u‖₁^b`, the right one without `C_N`.
pub fn gn_sides(u: &Field, p: f64, params: &MediumParams) -> Result<(f64, f64, GnExponents)> {
    let ex = gn_exponents(params, p)?;
    ensure!(u.min() >= 0.0, Domain, "field must be nonnegative");
    ensure!(u.max_abs() > 0.0, Domain, "field vanishes");
    let v = u.map(|x| x.powf(ex.r / 2.0))?;
    let energy = dirichlet_energy(&SpectralPlan::new(*u.grid()), &v, params.alpha);
    let lhs = lp_norm(u, p)?.powf(ex.a);
    let rhs = energy * lp_norm(u, 1.0)?.powf(ex.b);
    Ok((lhs, rhs, ex))
}

/// `C_N·RHS − LHS` of the interpolation inequality.
pub fn check_gn(u: &Field, p: f64, params: &MediumParams, c_n: f64) -> Result<f64> {
    ensure!(c_n > 0.0, Domain, "C_N must be positive, got {c_n}");
    let (lhs, rhs, _) = gn_sides(u, p, params)?;
    Ok(c_n * rhs - lhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    StroockVaropoulos,
    Nash,
    GagliardoNirenberg,
}

impl InequalityKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::StroockVaropoulos => "stroock_varopoulos",
            Self::Nash => "nash",
            Self::GagliardoNirenberg => "gagliardo_nirenberg",
        }
    }
}

/// Tolerance on a normalised margin.
pub const MARGIN_TOLERANCE: f64 = -1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub alpha: f64,
    /// `q` for Stroock–Varopoulos, `p` for the interpolation inequality.
    pub index: Option<f64>,
    pub trials: usize,
    /// Smallest slack over the suite, divided by the right-hand side.
    pub worst_margin: f64,
    pub exponents: Option<GnExponents>,
    /// Nash: largest ratio over the suite. Interpolation: the `C_N` used.
    pub empirical_constant: Option<f64>,
    pub margins: Vec<f64>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.worst_margin >= MARGIN_TOLERANCE
    }

    fn from_margins(
        kind: InequalityKind,
        alpha: f64,
        index: Option<f64>,
        margins: Vec<f64>,
    ) -> Self {
        Self {
            kind,
            alpha,
            index,
            trials: margins.len(),
            worst_margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
            exponents: None,
            empirical_constant: None,
            margins,
        }
    }
}

/// Stroock–Varopoulos over a suite; margins are `(LHS − RHS)/RHS` (absolute
/// when `RHS = 0`).
pub fn audit_stroock_varopoulos(fields: &[Field], alpha: f64, q: f64) -> Result<InequalityReport> {
    let margins = fields
        .iter()
        .map(|w| {
            let (lhs, rhs) = stroock_varopoulos_sides(w, alpha, q)?;
            Ok(if rhs > 0.0 { (lhs - rhs) / rhs } else { lhs - rhs })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalityReport::from_margins(InequalityKind::StroockVaropoulos, alpha, Some(q), margins))
}

/// Largest Nash ratio over the given fields.
pub fn empirical_nash_constant(fields: &[Field], alpha: f64) -> Result<f64> {
    ensure!(!fields.is_empty(), InsufficientData, "empty Nash suite");
    fields.iter().map(|v| check_nash(v, alpha)).try_fold(0.0, |m, r| Ok(f64::max(m, r?)))
}

/// Nash over a suite against `c_n`; margins are `1 − ratio/C_N`.
pub fn audit_nash(fields: &[Field], alpha: f64, c_n: f64) -> Result<InequalityReport> {
    let margins = fields
        .iter()
        .map(|v| Ok(1.0 - check_nash(v, alpha)? / c_n))
        .collect::<Result<Vec<_>>>()?;
    let mut report = InequalityReport::from_margins(InequalityKind::Nash, alpha, None, margins);
    report.empirical_constant = Some(c_n);
    Ok(report)
}

/// Interpolation inequality over a suite; margins are `(C_N·RHS − LHS)/(C_N·RHS)`.
pub fn audit_gn(fields: &[Field], p: f64, params: &MediumParams, c_n: f64) -> Result<InequalityReport> {
    let mut exponents = None;
    let margins = fields
        .iter()
        .map(|u| {
            let (lhs, rhs, ex) = gn_sides(u, p, params)?;
            exponents = Some(ex);
            Ok((c_n * rhs - lhs) / (c_n * rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report =
        InequalityReport::from_margins(InequalityKind::GagliardoNirenberg, params.alpha, Some(p), margins);
    report.exponents = exponents;
    report.empirical_constant = Some(c_n);
    Ok(report)
}

/// Full audit at one `α`: Stroock–Varopoulos for every `q`, the Nash constant
/// as the supremum over the suite together with the fields `u^{r/2}` that the
/// interpolation chain feeds into Nash, then Nash and the interpolation
/// inequality for every `p` with that constant.
pub fn audit_all(
    grid: Grid,
    alpha: f64,
    m: f64,
    indices: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    let params = MediumParams::new(grid.d, m, alpha)?;
    let fields = audit_fields(grid, trials, seed)?;
    let mut reports = Vec::new();
    for &q in indices {
        reports.push(audit_stroock_varopoulos(&fields, alpha, q)?);
    }
    let mut nash_suite = fields.clone();
    for &p in indices {
        let r = gn_exponents(&params, p)?.r;
        for u in &fields {
            nash_suite.push(u.map(|x| x.powf(r / 2.0))?);
        }
    }
    let c_n = empirical_nash_constant(&nash_suite, alpha)?;
    reports.push(audit_nash(&nash_suite, alpha, c_n)?);
    for &p in indices {
        reports.push(audit_gn(&fields, p, &params, c_n)?);
    }
    Ok(reports)
}
