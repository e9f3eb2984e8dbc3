use crate::error::{ensure, Result};
use crate::grid::Field;
use crate::profiles::{selfsim_value, BarenblattSpec};

/// Norm index: finite `p ≥ 1` or `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormIndex {
    Finite(f64),
    Infinity,
}

impl NormIndex {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Self::Infinity);
        }
        ensure!(p >= 1.0, Domain, "norm index must be >= 1, got {p}");
        Ok(Self::Finite(p))
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinity => 0.0,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Self::Finite(p) => *p,
            Self::Infinity => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for NormIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for NormIndex {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Self::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| {
                    crate::error::Error::Domain(format!("cannot parse norm index {other:?}"))
                })?;
                Self::new(p)
            }
        }
    }
}

/// Discrete `L^p` norm with uniform weight `hᵈ`.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    Ok(lp_norm_index(f, NormIndex::new(p)?))
}

pub fn lp_norm_index(f: &Field, p: NormIndex) -> f64 {
    match p {
        NormIndex::Infinity => f.max_abs(),
        NormIndex::Finite(p) if p == 1.0 => {
            f.values().iter().map(|v| v.abs()).sum::<f64>() * f.grid().cell_volume()
        }
        NormIndex::Finite(p) if p == 2.0 => {
            (f.values().iter().map(|v| v * v).sum::<f64>() * f.grid().cell_volume()).sqrt()
        }
        NormIndex::Finite(p) => {
            let s: f64 = f.values().iter().map(|v| v.abs().powf(p)).sum();
            (s * f.grid().cell_volume()).powf(1.0 / p)
        }
    }
}

/// Default relative threshold for [`support_radius`].
pub const SUPPORT_THRESHOLD: f64 = 1e-6;

/// Largest `|xᵢ|` over cells with `|fᵢ| > threshold · ‖f‖_∞`; zero for the zero field.
pub fn support_radius(f: &Field, threshold: f64) -> Result<f64> {
    ensure!(threshold > 0.0, Domain, "threshold must be positive, got {threshold}");
    let cut = threshold * f.max_abs();
    if cut == 0.0 {
        return Ok(0.0);
    }
    let g = f.grid();
    Ok(f.values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > cut)
        .map(|(k, _)| {
            let p = g.point(k);
            p[..g.d].iter().map(|x| x * x).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max))
}

/// Exact self-similar solution sampled on `grid`.
pub fn sample_selfsim(spec: &BarenblattSpec, t: f64, grid: crate::grid::Grid) -> Result<Field> {
    selfsim_value(spec, t, &[0.0; 2][..grid.d])?;
    Field::from_fn(grid, |x| selfsim_value(spec, t, x).unwrap_or(0.0))
}

/// `‖u − u_exact(t)‖₁ / ‖u_exact(t)‖₁` on the grid.
pub fn relative_l1_error(u: &Field, spec: &BarenblattSpec, t: f64) -> Result<f64> {
    let exact = sample_selfsim(spec, t, *u.grid())?;
    let diff: f64 = u.values().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).sum();
    let norm: f64 = exact.values().iter().map(|v| v.abs()).sum();
    ensure!(norm > 0.0, InsufficientData, "exact solution vanishes on the grid");
    Ok(diff / norm)
}

/// L¹ distance between the rescaled snapshot `t^{dλ} u(t, y t^λ)` and `Φ(y)`,
/// relative to `∫Φ`. Computed in the original variables, where the change of
/// variables `x = y t^λ` makes it equal to the relative L¹ error at time `t`.
pub fn collapse_error(u: &Field, spec: &BarenblattSpec, t: f64) -> Result<f64> {
    relative_l1_error(u, spec, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::specfun::MediumParams;

    #[test]
    fn indicator_norms() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let h = g.spacing();
        let f = Field::from_fn(g, |x| if x[0].abs() < 0.3 { 1.0 } else { 0.0 }).unwrap();
        let k = f.values().iter().filter(|v| **v == 1.0).count() as f64;
        for p in [1.0, 1.5, 2.0, 3.0] {
            assert!((lp_norm(&f, p).unwrap() - (k * h).powf(1.0 / p)).abs() < 1e-14);
        }
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn barenblatt_norms() {
        let p = MediumParams::new(1, 2.0, 2.0).unwrap();
        let spec = BarenblattSpec::new(p, 1.0).unwrap();
        let g = Grid::new(1, 4.0, 4096).unwrap();
        let u = sample_selfsim(&spec, 1.0, g).unwrap();
        let mass = crate::profiles::profile_mass(&spec).unwrap();
        assert!((lp_norm(&u, 1.0).unwrap() - mass).abs() < 1e-6);
        assert!((lp_norm(&u, f64::INFINITY).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn support_radius_of_exact_solution() {
        let p = MediumParams::new(1, 2.0, 1.0).unwrap();
        let spec = BarenblattSpec::new(p, 1.0).unwrap();
        let g = Grid::new(1, 8.0, 1024).unwrap();
        let h = g.spacing();
        let u1 = sample_selfsim(&spec, 1.0, g).unwrap();
        assert!((support_radius(&u1, SUPPORT_THRESHOLD).unwrap() - 1.0).abs() <= h);
        let u4 = sample_selfsim(&spec, 4.0, g).unwrap();
        assert!((support_radius(&u4, SUPPORT_THRESHOLD).unwrap() - 2.0).abs() <= h);
        assert_eq!(support_radius(&Field::zeros(g), SUPPORT_THRESHOLD).unwrap(), 0.0);
    }

    #[test]
    fn norm_index_parsing() {
        assert_eq!("inf".parse::<NormIndex>().unwrap(), NormIndex::Infinity);
        assert_eq!("2".parse::<NormIndex>().unwrap(), NormIndex::Finite(2.0));
        assert!("0.5".parse::<NormIndex>().is_err());
    }
}
