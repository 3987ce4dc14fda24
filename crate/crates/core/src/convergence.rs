//! Empirical convergence rates.

use crate::error::{BoasError, Result};

/// Least-squares slope of `log2(err)` against `log2(n)`. Points with a zero
/// error carry no rate information and are skipped; at least four must remain.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, e)| *n > 0.0 && *e > 0.0 && e.is_finite())
        .map(|(n, e)| (n.log2(), e.log2()))
        .collect();
    if logs.len() < 4 {
        return Err(BoasError::InsufficientData(format!(
            "{} usable points, need at least 4",
            logs.len()
        )));
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(BoasError::Degenerate("all sizes are equal".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_laws() {
        let pts: Vec<(f64, f64)> = [16.0, 32.0, 64.0, 128.0, 256.0]
            .iter()
            .map(|&n: &f64| (n, 3.0 * n.powf(-2.0)))
            .collect();
        assert!((fit_slope(&pts).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn skips_zero_errors() {
        let pts = [(8.0, 0.0), (16.0, 1.0 / 16.0), (32.0, 1.0 / 32.0), (64.0, 1.0 / 64.0), (128.0, 1.0 / 128.0)];
        assert!((fit_slope(&pts).unwrap() + 1.0).abs() < 1e-12);
        assert!(matches!(
            fit_slope(&pts[..4]),
            Err(BoasError::InsufficientData(_))
        ));
    }
}
