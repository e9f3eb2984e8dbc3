use crate::error::{ensure, Result};

/// Ordinary least-squares line through `(x, y)`; returns `(slope, intercept)`.
pub fn least_squares(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    ensure!(points.len() >= 2, InsufficientData, "need at least 2 points, got {}", points.len());
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    ensure!(sxx > 0.0, InsufficientData, "abscissae are all equal");
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Slope of `log y` against `log x`. All coordinates must be positive.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    ensure!(
        points.iter().all(|p| p.0 > 0.0 && p.1 > 0.0),
        Domain,
        "log-log fit needs positive data"
    );
    let logs: Vec<(f64, f64)> = points.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    Ok(least_squares(&logs)?.0)
}
