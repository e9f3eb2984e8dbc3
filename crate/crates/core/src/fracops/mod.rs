//! Fractional operators: spectral implementations on the periodic grid and
//! direct-quadrature oracles on `ℝᵈ`.

mod direct;
mod spectral;

pub use direct::{frac_laplacian_quadrature, riesz_quadrature, CompactFn};
pub use spectral::{
    divergence_spectral, frac_gradient_spectral, frac_laplacian_spectral,
    riesz_potential_spectral, SpectralPlan,
};
