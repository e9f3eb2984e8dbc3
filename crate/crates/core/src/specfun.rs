//! Special functions and the closed-form constants of the self-similar theory.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Parameters `(d, m, α)` of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub d: usize,
    pub m: f64,
    pub alpha: f64,
}

impl MediumParams {
    pub fn new(d: usize, m: f64, alpha: f64) -> Result<Self> {
        let p = Self { d, m, alpha };
        p.validate()?;
        Ok(p)
    }

    /// `d ≥ 1`, `m > 1`, `0 < α ≤ 2`.
    pub fn validate(&self) -> Result<()> {
        ensure!(self.d >= 1, InvalidParams, "dimension must be >= 1, got {}", self.d);
        ensure!(
            self.m.is_finite() && self.m > 1.0,
            InvalidParams,
            "m must be > 1, got {}",
            self.m
        );
        ensure!(
            self.alpha.is_finite() && self.alpha > 0.0 && self.alpha <= 2.0,
            InvalidParams,
            "alpha must lie in (0, 2], got {}",
            self.alpha
        );
        Ok(())
    }

    /// `d(m − 1) + α`, the denominator of every similarity exponent.
    pub fn scaling_denominator(&self) -> f64 {
        self.d as f64 * (self.m - 1.0) + self.alpha
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn nonpositive_integer(x: f64) -> Option<u64> {
    if x <= 0.0 && x == x.round() {
        Some((-x) as u64)
    } else {
        None
    }
}

/// `sin(πx)` with argument reduction so that integers give exact zeros.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() == 1.0 || r == 0.0 {
        return 0.0;
    }
    (PI * r).sin()
}

fn lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power to keep t^(x+1/2) finite for large x
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * acc
}

/// Euler Gamma function.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite {x}")));
    }
    if nonpositive_integer(x).is_some() {
        return Err(Error::Pole(x));
    }
    if x == x.round() && x <= 171.0 {
        // exact factorials for small positive integers
        let n = x as u64;
        if n <= 23 {
            return Ok((1..n).fold(1.0, |acc, k| acc * k as f64));
        }
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * lanczos(1.0 - x)))
    } else {
        Ok(lanczos(x))
    }
}

/// `1/Γ(x)`, entire; zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    match gamma_fn(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Digamma function `ψ(x) = Γ'(x)/Γ(x)`.
pub fn digamma(x: f64) -> Result<f64> {
    if nonpositive_integer(x).is_some() {
        return Err(Error::Pole(x));
    }
    let mut x = x;
    let mut acc = 0.0;
    if x < 0.5 {
        // ψ(x) = ψ(1 − x) − π cot(πx)
        let s = sin_pi(x);
        let c = (PI * x).cos();
        acc -= PI * c / s;
        x = 1.0 - x;
    }
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// Relative size below which a series term counts as negligible.
const SERIES_RTOL: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 500;
/// `c − a − b` closer than this to an integer takes the logarithmic branch.
const INTEGER_GAP_TOL: f64 = 1e-12;

/// Sum `Σ tₙ` where `t₀ = first` and `tₙ₊₁ = tₙ · ratio(n)`.
fn sum_series(first: f64, mut ratio: impl FnMut(usize) -> f64) -> Result<f64> {
    let mut term = first;
    let mut sum = first;
    let mut small_run = 0;
    for n in 0..SERIES_MAX_TERMS {
        term *= ratio(n);
        sum += term;
        if term.abs() <= SERIES_RTOL * sum.abs() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Convergence(SERIES_MAX_TERMS))
}

fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    sum_series(1.0, |n| {
        let n = n as f64;
        (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
    })
}

fn terminating(a: f64, b: f64, c: f64, z: f64, degree: u64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..degree {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
    }
    sum
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for real parameters and
/// `z ∈ [0, 1]`.
///
/// Terminating series are summed exactly. Otherwise the Maclaurin series is
/// used for `z ≤ 1/2` and the `1 − z` connection formulas above that, with
/// the logarithmic forms when `c − a − b` is an integer. At `z = 1` the
/// Gauss summation theorem applies when `c − a − b > 0`.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    ensure!(
        a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite(),
        Domain,
        "non-finite hypergeometric argument"
    );
    if nonpositive_integer(c).is_some() {
        return Err(Error::Domain(format!("c = {c} is a nonpositive integer")));
    }
    ensure!((0.0..=1.0).contains(&z), Domain, "z = {z} outside [0, 1]");
    if z == 0.0 {
        return Ok(1.0);
    }
    let degree = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(p), Some(q)) => Some(p.min(q)),
        (p, q) => p.or(q),
    };
    if let Some(n) = degree {
        return Ok(terminating(a, b, c, z, n));
    }
    let s = c - a - b;
    if z == 1.0 {
        if s <= 0.0 {
            return Err(Error::Divergent(s));
        }
        return Ok(gamma_fn(c)? * gamma_fn(s)? * rgamma(c - a) * rgamma(c - b));
    }
    if z <= 0.5 {
        return gauss_series(a, b, c, z);
    }
    near_one(a, b, c, z)
}

fn near_one(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let w = 1.0 - z;
    let s = c - a - b;
    let m = s.round();
    if (s - m).abs() < INTEGER_GAP_TOL {
        if m >= 0.0 {
            return log_connection(a, b, m as usize, w);
        }
        // Euler: F(a,b;c;z) = (1−z)^{c−a−b} F(c−a, c−b; c; z)
        return Ok(w.powf(s) * hyp2f1(c - a, c - b, c, z)?);
    }
    let g_c = gamma_fn(c)?;
    let first = g_c * gamma_fn(s)? * rgamma(c - a) * rgamma(c - b);
    let second = g_c * gamma_fn(-s)? * rgamma(a) * rgamma(b);
    let mut value = 0.0;
    if first != 0.0 {
        value += first * gauss_series(a, b, 1.0 - s, w)?;
    }
    if second != 0.0 {
        value += second * w.powf(s) * gauss_series(c - a, c - b, 1.0 + s, w)?;
    }
    Ok(value)
}

/// `F(a, b; a + b + m; 1 − w)` for integer `m ≥ 0` and `0 < w < 1/2`.
fn log_connection(a: f64, b: f64, m: usize, w: f64) -> Result<f64> {
    let ln_w = w.ln();
    let mf = m as f64;
    let mut psi_n1 = digamma(1.0)?;
    let mut psi_nm1 = digamma(mf + 1.0)?;
    let mut psi_a = digamma(a + mf)?;
    let mut psi_b = digamma(b + mf)?;

    let mut finite_part = 0.0;
    if m > 0 {
        let mut term = 1.0;
        for n in 0..m {
            finite_part += term;
            let nf = n as f64;
            term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
        }
        finite_part *= gamma_fn(mf)? * gamma_fn(a + b + mf)? * rgamma(a + mf) * rgamma(b + mf);
    }

    // coefficient (a+m)_n (b+m)_n / (n! (n+m)!) · w^n, starting at 1/m!
    let mut coeff = rgamma(mf + 1.0);
    let mut sum = 0.0;
    let mut small_run = 0;
    let mut converged = false;
    for n in 0..SERIES_MAX_TERMS {
        let bracket = if m == 0 {
            2.0 * psi_n1 - psi_a - psi_b - ln_w
        } else {
            ln_w - psi_n1 - psi_nm1 + psi_a + psi_b
        };
        let term = coeff * bracket;
        sum += term;
        if term.abs() <= SERIES_RTOL * sum.abs() {
            small_run += 1;
            if small_run == 2 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        let nf = n as f64;
        coeff *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * w;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
    }
    if !converged {
        return Err(Error::Convergence(SERIES_MAX_TERMS));
    }
    let prefactor = gamma_fn(a + b + mf)? * rgamma(a) * rgamma(b);
    if m == 0 {
        Ok(prefactor * sum)
    } else {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        Ok(finite_part - sign * prefactor * w.powi(m as i32) * sum)
    }
}

/// Similarity exponent `λ = 1/(d(m−1)+α)`.
pub fn lambda_exponent(p: &MediumParams) -> f64 {
    1.0 / p.scaling_denominator()
}

/// `K_{α,d} = Γ(d/2) / (2^α Γ(1+α/2) Γ((d+α)/2))`, the reciprocal of the constant
/// value of `(−Δ)^{α/2}(1−|y|²)₊^{α/2}` inside the unit ball.
pub fn getoor_constant(d: usize, alpha: f64) -> Result<f64> {
    ensure!(d >= 1, InvalidParams, "dimension must be >= 1");
    ensure!(alpha > 0.0 && alpha <= 2.0, InvalidParams, "alpha must lie in (0, 2], got {alpha}");
    let df = d as f64;
    Ok(gamma_fn(df / 2.0)?
        / (2f64.powf(alpha) * gamma_fn(1.0 + alpha / 2.0)? * gamma_fn((df + alpha) / 2.0)?))
}

/// Amplitude `k = dλ K_{α,d}` of the self-similar profile.
pub fn barenblatt_k(p: &MediumParams) -> Result<f64> {
    p.validate()?;
    let df = p.d as f64;
    let gammas = gamma_fn(df / 2.0)?
        / (2f64.powf(p.alpha) * gamma_fn(1.0 + p.alpha / 2.0)? * gamma_fn((df + p.alpha) / 2.0)?);
    Ok(df / p.scaling_denominator() * gammas)
}

/// Normalisation `C_β = Γ((d−β)/2) / (2^β π^{d/2} Γ(β/2))` of the Riesz kernel,
/// so that `I_β = (−Δ)^{−β/2}`.
pub fn riesz_kernel_constant(d: usize, beta: f64) -> Result<f64> {
    let df = d as f64;
    ensure!(beta > 0.0 && beta < df, Domain, "beta = {beta} outside (0, {d})");
    Ok(gamma_fn((df - beta) / 2.0)?
        / (2f64.powf(beta) * PI.powf(df / 2.0) * gamma_fn(beta / 2.0)?))
}

/// Normalisation `c_{d,α} = 2^α Γ((d+α)/2) / (π^{d/2} |Γ(−α/2)|)` of the singular
/// integral form of `(−Δ)^{α/2}`.
pub fn frac_laplacian_constant(d: usize, alpha: f64) -> Result<f64> {
    ensure!(alpha > 0.0 && alpha < 2.0, Domain, "alpha = {alpha} outside (0, 2)");
    let df = d as f64;
    Ok(2f64.powf(alpha) * gamma_fn((df + alpha) / 2.0)?
        / (PI.powf(df / 2.0) * gamma_fn(-alpha / 2.0)?.abs()))
}

fn check_riesz_profile_args(gamma: f64, beta: f64, d: usize) -> Result<()> {
    let df = d as f64;
    ensure!(gamma > 0.0 && gamma.is_finite(), Domain, "gamma = {gamma} must be positive");
    ensure!(
        beta > 0.0 && beta < df.min(2.0),
        Domain,
        "beta = {beta} outside (0, min(d, 2)) for d = {d}"
    );
    Ok(())
}

/// Interior constant `C_{γ,β,d}` of the Riesz potential of `(1−|y|²)₊^{γ/2}`.
pub fn riesz_interior_constant(gamma: f64, beta: f64, d: usize) -> Result<f64> {
    check_riesz_profile_args(gamma, beta, d)?;
    let df = d as f64;
    Ok(2f64.powf(-beta) * gamma_fn(gamma / 2.0 + 1.0)? * gamma_fn((df - beta) / 2.0)?
        / (gamma_fn(df / 2.0)? * gamma_fn((beta + gamma) / 2.0 + 1.0)?))
}

fn exterior_hyp_params(gamma: f64, beta: f64, d: usize) -> (f64, f64, f64) {
    let df = d as f64;
    ((df - beta) / 2.0, (2.0 - beta) / 2.0, (df + gamma) / 2.0 + 1.0)
}

/// Exterior constant obtained by matching the two branches at `r = 1`.
pub fn riesz_exterior_constant(gamma: f64, beta: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    let inner_at_one = riesz_interior_constant(gamma, beta, d)?
        * hyp2f1((df - beta) / 2.0, -(gamma + beta) / 2.0, df / 2.0, 1.0)?;
    let (a, b, c) = exterior_hyp_params(gamma, beta, d);
    Ok(inner_at_one / hyp2f1(a, b, c, 1.0)?)
}

/// Closed form of the exterior constant, read off from the far-field
/// behaviour `I_β f(y) ≈ C_β |y|^{β−d} ∫f`.
pub fn riesz_exterior_constant_asymptotic(gamma: f64, beta: f64, d: usize) -> Result<f64> {
    check_riesz_profile_args(gamma, beta, d)?;
    let df = d as f64;
    Ok(2f64.powf(-beta) * gamma_fn(gamma / 2.0 + 1.0)? * gamma_fn((df - beta) / 2.0)?
        / (gamma_fn(beta / 2.0)? * gamma_fn((df + gamma) / 2.0 + 1.0)?))
}

/// Riesz potential `I_β((1−|·|²)₊^{γ/2})` evaluated at radius `r`.
///
/// Inside the ball:
/// `C_{γ,β,d} · ₂F₁((d−β)/2, −(γ+β)/2; d/2; r²)`.
/// Outside: `Ĉ · r^{β−d} · ₂F₁((d−β)/2, 1−β/2; (d+γ)/2 + 1; r⁻²)` with `Ĉ`
/// fixed by continuity at `r = 1`.
pub fn riesz_profile_closed_form(r: f64, gamma: f64, beta: f64, d: usize) -> Result<f64> {
    check_riesz_profile_args(gamma, beta, d)?;
    ensure!(r >= 0.0 && r.is_finite(), Domain, "radius {r} must be nonnegative");
    let df = d as f64;
    if r <= 1.0 {
        let c = riesz_interior_constant(gamma, beta, d)?;
        Ok(c * hyp2f1((df - beta) / 2.0, -(gamma + beta) / 2.0, df / 2.0, r * r)?)
    } else {
        let c = riesz_exterior_constant(gamma, beta, d)?;
        let (a, b, cc) = exterior_hyp_params(gamma, beta, d);
        Ok(c * r.powf(beta - df) * hyp2f1(a, b, cc, 1.0 / (r * r))?)
    }
}
