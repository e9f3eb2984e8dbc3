use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("hypergeometric series diverges at z = 1 (c - a - b = {0})")]
    Divergent(f64),

    #[error("series did not converge within {0} terms")]
    Convergence(usize),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("time step {dt} exceeds the stable step {stable}")]
    Cfl { dt: f64, stable: f64 },

    #[error("blow-up guard tripped at t = {t}: sup norm {sup} > {limit}")]
    BlowUp { t: f64, sup: f64, limit: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;
