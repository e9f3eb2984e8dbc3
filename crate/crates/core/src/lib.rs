//! Numerical laboratory for the nonlocal porous medium equation
//!
//! ```text
//! ∂ₜu = ∇·(u ∇^{α−1}(|u|^{m−1})),   x ∈ ℝᵈ, m > 1, α ∈ (0, 2]
//! ```
//!
//! The crate is split by concern:
//!
//! * [`specfun`]: Gamma, digamma, Gauss ₂F₁ and every closed-form constant
//!   (similarity exponent, profile amplitude, Getoor constant, Riesz potential
//!   of a compact radial profile).
//! * [`profiles`]: compactly supported self-similar (Barenblatt-type) solutions.
//! * [`grid`]: periodic grids and sampled fields.
//! * [`fracops`]: Fourier-multiplier operators `∇^β`, `(−Δ)^{α/2}`, `I_β` on the
//!   periodic grid, and slow direct-quadrature oracles for the same operators.
//! * [`solver`]: hybrid spectral-velocity / upwind finite-volume integrator for
//!   the Cauchy problem.
//! * [`diagnostics`]: norms, decay fits, functional-inequality audits and
//!   identity checks.

pub mod diagnostics;
pub mod error;
pub mod fracops;
pub mod grid;
pub mod profiles;
pub mod quadrature;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
pub use grid::{Field, Grid, VectorField};
pub use profiles::BarenblattSpec;
pub use specfun::MediumParams;
