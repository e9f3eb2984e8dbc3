//! Fourier-multiplier operators on the periodic grid.
//!
//! Every operator here is `F⁻¹ m(ξ) F` for a multiplier `m` that vanishes at
//! `ξ = 0`, so outputs are mean-free. Odd (vector) multipliers drop the
//! unpaired Nyquist mode along their own axis, since `iξ` applied to it does
//! not produce a real field.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{ensure, Result};
use crate::grid::{Field, Grid, VectorField};

/// Cached FFT plans for one grid. Immutable and shareable across threads;
/// every call allocates its own scratch buffers.
#[derive(Clone)]
pub struct SpectralPlan {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPlan").field("grid", &self.grid).finish()
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            dst[j * n + i] = src[i * n + j];
        }
    }
}

impl SpectralPlan {
    pub fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            forward: planner.plan_fft_forward(grid.n),
            inverse: planner.plan_fft_inverse(grid.n),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    fn transform(&self, buf: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        fft.process(buf);
        if self.grid.d == 2 {
            let n = self.grid.n;
            let mut tmp = vec![Complex64::default(); buf.len()];
            transpose(buf, &mut tmp, n);
            fft.process(&mut tmp);
            transpose(&tmp, buf, n);
        }
    }

    /// Unnormalised forward DFT.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut buf, &self.forward);
        buf
    }

    /// Inverse DFT, normalised, real part.
    pub fn inverse_real(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut spectrum, &self.inverse);
        let scale = 1.0 / spectrum.len() as f64;
        spectrum.into_iter().map(|c| c.re * scale).collect()
    }

    /// Wave vector and per-axis Nyquist flags at a flat spectral index.
    fn mode(&self, flat: usize) -> ([f64; 2], [bool; 2]) {
        let g = &self.grid;
        let [i, j] = g.unflatten(flat);
        match g.d {
            1 => ([g.wavenumber(i), 0.0], [g.is_nyquist(i), false]),
            _ => ([g.wavenumber(i), g.wavenumber(j)], [g.is_nyquist(i), g.is_nyquist(j)]),
        }
    }

    /// Apply a real radial multiplier `m(|ξ|)`; the zero mode is set to zero.
    pub fn apply_radial(&self, f: &Field, multiplier: impl Fn(f64) -> f64) -> Field {
        let mut spec = self.forward(f.values());
        for (k, c) in spec.iter_mut().enumerate() {
            let (xi, _) = self.mode(k);
            let norm = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            *c *= if norm == 0.0 { 0.0 } else { multiplier(norm) };
        }
        Field::from_vec_unchecked(self.grid, self.inverse_real(spec))
    }

    /// `(−Δ)^{α/2}`: multiplier `|ξ|^α`.
    pub fn frac_laplacian(&self, f: &Field, alpha: f64) -> Field {
        self.apply_radial(f, |k| k.powf(alpha))
    }

    /// `I_β` in the mean-zero gauge: multiplier `|ξ|^{−β}` off the zero mode.
    pub fn riesz_potential(&self, f: &Field, beta: f64) -> Field {
        self.apply_radial(f, |k| k.powf(-beta))
    }

    /// `∇^β`: vector multiplier `iξ_j |ξ|^{β−1}`.
    pub fn frac_gradient(&self, f: &Field, beta: f64) -> VectorField {
        let spec = self.forward(f.values());
        let components = (0..self.grid.d)
            .map(|axis| {
                let out: Vec<Complex64> = spec
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| {
                        let (xi, nyq) = self.mode(k);
                        let norm = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
                        if norm == 0.0 || nyq[axis] {
                            Complex64::default()
                        } else {
                            c * Complex64::new(0.0, xi[axis] * norm.powf(beta - 1.0))
                        }
                    })
                    .collect();
                self.inverse_real(out)
            })
            .collect();
        VectorField::from_vecs_unchecked(self.grid, components)
    }

    /// Spectral divergence `Σ_j F⁻¹(iξ_j F w_j)`.
    pub fn divergence(&self, w: &VectorField) -> Field {
        let mut acc = vec![Complex64::default(); self.grid.len()];
        for axis in 0..self.grid.d {
            let spec = self.forward(w.component(axis));
            for (k, (a, c)) in acc.iter_mut().zip(spec).enumerate() {
                let (xi, nyq) = self.mode(k);
                if !nyq[axis] {
                    *a += c * Complex64::new(0.0, xi[axis]);
                }
            }
        }
        Field::from_vec_unchecked(self.grid, self.inverse_real(acc))
    }

    /// Exact heat semigroup `exp(ε t Δ)`: multiplier `e^{−εt|ξ|²}`, zero mode kept.
    pub fn heat(&self, f: &Field, eps_t: f64) -> Field {
        let mut spec = self.forward(f.values());
        for (k, c) in spec.iter_mut().enumerate() {
            let (xi, _) = self.mode(k);
            *c *= (-eps_t * (xi[0] * xi[0] + xi[1] * xi[1])).exp();
        }
        Field::from_vec_unchecked(self.grid, self.inverse_real(spec))
    }
}

/// `(−Δ)^{α/2} f` via the multiplier `|ξ|^α`, `0 < α ≤ 2`.
pub fn frac_laplacian_spectral(f: &Field, alpha: f64) -> Result<Field> {
    ensure!(alpha > 0.0 && alpha <= 2.0, Domain, "alpha = {alpha} outside (0, 2]");
    Ok(SpectralPlan::new(*f.grid()).frac_laplacian(f, alpha))
}

/// `∇^β f` via the multiplier `iξ|ξ|^{β−1}`, `−1 < β ≤ 1`.
pub fn frac_gradient_spectral(f: &Field, beta: f64) -> Result<VectorField> {
    ensure!(beta > -1.0 && beta <= 1.0, Domain, "beta = {beta} outside (-1, 1]");
    Ok(SpectralPlan::new(*f.grid()).frac_gradient(f, beta))
}

/// `I_β f` up to periodisation error, in the mean-zero gauge: the result is
/// the Riesz potential of `f − mean(f)`. Requires `0 < β < d`.
pub fn riesz_potential_spectral(f: &Field, beta: f64) -> Result<Field> {
    let d = f.grid().d as f64;
    ensure!(beta > 0.0 && beta < d, Domain, "beta = {beta} outside (0, {d})");
    Ok(SpectralPlan::new(*f.grid()).riesz_potential(f, beta))
}

/// Spectral divergence of a vector field.
pub fn divergence_spectral(w: &VectorField) -> Field {
    SpectralPlan::new(*w.grid()).divergence(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine_field(n: usize, l: f64) -> Field {
        let g = Grid::new(1, l, n).unwrap();
        Field::from_fn(g, |x| (PI * x[0] / l).sin()).unwrap()
    }

    #[test]
    fn constant_maps_to_zero() {
        let g = Grid::new(2, 3.0, 16).unwrap();
        let f = Field::from_fn(g, |_| 2.5).unwrap();
        assert!(frac_laplacian_spectral(&f, 0.7).unwrap().max_abs() < 1e-14);
        assert!(frac_gradient_spectral(&f, 0.3).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn sine_is_an_eigenfunction() {
        let l = 3.0;
        let f = sine_field(64, l);
        for alpha in [0.5, 1.0, 1.7, 2.0] {
            let out = frac_laplacian_spectral(&f, alpha).unwrap();
            let scale = (PI / l).powf(alpha);
            for (o, v) in out.values().iter().zip(f.values()) {
                assert!((o - scale * v).abs() < 1e-12);
            }
        }
        let grad = frac_gradient_spectral(&f, 1.0).unwrap();
        let g = f.grid();
        for (i, w) in grad.component(0).iter().enumerate() {
            let x = g.coord(i);
            assert!((w - PI / l * (PI * x / l).cos()).abs() < 1e-12);
        }
        let riesz = riesz_potential_spectral(&f, 0.6).unwrap();
        for (o, v) in riesz.values().iter().zip(f.values()) {
            assert!((o - (PI / l).powf(-0.6) * v).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_two_is_minus_laplacian() {
        // −∂² of sin(3πx/L) is (3π/L)² sin(3πx/L); also in 2D with a product mode
        let g = Grid::new(2, 2.0, 32).unwrap();
        let k1 = PI / 2.0;
        let f = Field::from_fn(g, |x| (k1 * x[0]).sin() * (2.0 * k1 * x[1]).cos()).unwrap();
        let out = frac_laplacian_spectral(&f, 2.0).unwrap();
        let lam = k1 * k1 * 5.0;
        for (o, v) in out.values().iter().zip(f.values()) {
            assert!((o - lam * v).abs() < 1e-11);
        }
    }

    #[test]
    fn heat_factor_preserves_mean() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let f = Field::from_fn(g, |x| (-x[0] * x[0]).exp()).unwrap();
        let h = SpectralPlan::new(g).heat(&f, 0.3);
        assert!((h.integral() - f.integral()).abs() < 1e-13);
    }
}
