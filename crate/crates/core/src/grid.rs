//! Uniform periodic grids on `[−L, L)^d` and real-valued samples on them.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Uniform periodic grid with `n` points per axis on `[−L, L)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub d: usize,
    pub half_width: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(d: usize, half_width: f64, n: usize) -> Result<Self> {
        ensure!(d == 1 || d == 2, InvalidParams, "grid dimension must be 1 or 2, got {d}");
        ensure!(
            half_width.is_finite() && half_width > 0.0,
            InvalidParams,
            "half-width must be positive, got {half_width}"
        );
        ensure!(
            n >= 8 && n.is_power_of_two(),
            InvalidParams,
            "points per axis must be a power of two >= 8, got {n}"
        );
        Ok(Self { d, half_width, n })
    }

    /// Grid spacing `h = 2L/n`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Cell volume `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.d as i32)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of index `i` along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn coords_1d(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    /// Multi-index of a flat row-major index (last axis fastest).
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        match self.d {
            1 => [flat, 0],
            _ => [flat / self.n, flat % self.n],
        }
    }

    /// Physical point of a flat index; unused trailing coordinates are zero.
    pub fn point(&self, flat: usize) -> [f64; 2] {
        let [i, j] = self.unflatten(flat);
        match self.d {
            1 => [self.coord(i), 0.0],
            _ => [self.coord(i), self.coord(j)],
        }
    }

    /// Angular wavenumber `ξ = πk/L` of DFT index `i`, with `k ∈ [−n/2, n/2)`.
    pub fn wavenumber(&self, i: usize) -> f64 {
        let n = self.n as isize;
        let k = if (i as isize) < n / 2 { i as isize } else { i as isize - n };
        std::f64::consts::PI * k as f64 / self.half_width
    }

    /// Whether DFT index `i` is the unpaired Nyquist mode `k = −n/2`.
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Same grid with every length multiplied by `s`.
    pub fn dilated(&self, s: f64) -> Self {
        Self { half_width: self.half_width * s, ..*self }
    }
}

/// Real samples on a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        ensure!(
            values.len() == grid.len(),
            InvalidParams,
            "field has {} values, grid needs {}",
            values.len(),
            grid.len()
        );
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite value at index {i}")));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_vec_unchecked(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    /// Sample `f` at every grid point (the slice has `d` coordinates).
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|k| {
                let p = grid.point(k);
                f(&p[..grid.d])
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// `Σ fᵢ hᵈ`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Grid inner product `Σ fᵢ gᵢ hᵈ`.
    pub fn dot(&self, other: &Field) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>()
            * self.grid.cell_volume()
    }
}

/// `d` component arrays on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    components: Vec<Vec<f64>>,
}

impl VectorField {
    pub fn new(grid: Grid, components: Vec<Vec<f64>>) -> Result<Self> {
        ensure!(
            components.len() == grid.d,
            InvalidParams,
            "expected {} components, got {}",
            grid.d,
            components.len()
        );
        for c in &components {
            Field::new(grid, c.clone())?;
        }
        Ok(Self { grid, components })
    }

    pub(crate) fn from_vecs_unchecked(grid: Grid, components: Vec<Vec<f64>>) -> Self {
        Self { grid, components }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, components: vec![vec![0.0; grid.len()]; grid.d] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, j: usize) -> &[f64] {
        &self.components[j]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// `max_j max_i |w_j(xᵢ)|`.
    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise `Σ_j w_j²` integrated over the grid.
    pub fn squared_norm(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v * v)
            .sum::<f64>()
            * self.grid.cell_volume()
    }
}
