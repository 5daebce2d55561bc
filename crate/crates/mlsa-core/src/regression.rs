//! Ordinary least squares on log-log transformed data, used to fit
//! complexity slopes.

use crate::error::{Error, Result};

/// Fitted power law `y = e^{intercept}·x^{slope}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// Exponent of the power law (slope in log-log space).
    pub slope: f64,
    /// Intercept in log-log space.
    pub intercept: f64,
    /// Coefficient of determination of the log-log regression.
    pub r2: f64,
}

/// Fits `ln y = intercept + slope·ln x` by ordinary least squares.
///
/// Requires at least two points with distinct, strictly positive abscissae
/// and strictly positive ordinates.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit("need at least two points"));
    }
    for &(x, y) in points {
        if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::DegenerateFit("coordinates must be positive and finite"));
        }
    }
    for (i, &(xi, _)) in points.iter().enumerate() {
        if points[i + 1..].iter().any(|&(xj, _)| xj == xi) {
            return Err(Error::DegenerateFit("abscissae must be distinct"));
        }
    }

    let n = points.len() as f64;
    let logs: alloc::vec::Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (libm::log(x), libm::log(y)))
        .collect();
    let x_bar = logs.iter().map(|&(x, _)| x).sum::<f64>() / n;
    let y_bar = logs.iter().map(|&(_, y)| y).sum::<f64>() / n;

    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in &logs {
        let (dx, dy) = (x - x_bar, y - y_bar);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let ss_res = syy - slope * sxy;
    let r2 = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        // All ordinates equal: a horizontal line fits exactly.
        1.0
    };

    Ok(PowerLawFit { slope, intercept, r2 })
}
