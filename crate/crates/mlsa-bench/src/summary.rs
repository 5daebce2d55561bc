//! Per-(scheme, accuracy) aggregation and complexity slope fits.

use crate::run::ResultRow;
use mlsa_core::fit_loglog;
use serde::{Deserialize, Serialize};

/// Aggregated statistics of one (scheme, accuracy) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryRow {
    /// Scheme label.
    pub scheme: String,
    /// Prescribed accuracy ε.
    pub epsilon: f64,
    /// Completed replications.
    pub runs: u32,
    /// Root-mean-square error against the analytical VaR.
    pub rmse: f64,
    /// Mean loss-simulator evaluations per run.
    pub mean_evals: f64,
    /// Mean wall time per run in seconds.
    pub mean_time_s: f64,
}

/// Log-log regression result, serialization mirror of the core fit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SlopeFit {
    /// Fitted exponent.
    pub slope: f64,
    /// Intercept in log space.
    pub intercept: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

impl From<mlsa_core::PowerLawFit> for SlopeFit {
    fn from(f: mlsa_core::PowerLawFit) -> Self {
        SlopeFit { slope: f.slope, intercept: f.intercept, r2: f.r2 }
    }
}

/// Fitted complexity slopes of one scheme across the accuracy grid.
///
/// `None` flags that the fit was not possible (fewer than two accuracies,
/// or degenerate data).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeSlopes {
    /// Scheme label.
    pub scheme: String,
    /// Mean evaluations against ε (primary complexity proxy).
    pub evals_vs_eps: Option<SlopeFit>,
    /// Mean wall time against ε.
    pub time_vs_eps: Option<SlopeFit>,
    /// Mean evaluations against achieved RMSE.
    pub evals_vs_rmse: Option<SlopeFit>,
    /// Mean wall time against achieved RMSE.
    pub time_vs_rmse: Option<SlopeFit>,
}

/// Full summary of an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    /// One row per (scheme, accuracy), in first-appearance order.
    pub rows: Vec<SummaryRow>,
    /// One slope record per scheme.
    pub slopes: Vec<SchemeSlopes>,
}

/// Aggregates raw result rows into per-cell summaries and per-scheme
/// slopes.
pub fn summarize(rows: &[ResultRow]) -> Summary {
    // Group by (scheme, epsilon) preserving first-appearance order.
    let mut order: Vec<(String, f64)> = Vec::new();
    for row in rows {
        if !order.iter().any(|(s, e)| s == &row.scheme && *e == row.epsilon) {
            order.push((row.scheme.clone(), row.epsilon));
        }
    }

    let mut summary_rows = Vec::with_capacity(order.len());
    for (scheme, epsilon) in &order {
        let cell: Vec<&ResultRow> =
            rows.iter().filter(|r| &r.scheme == scheme && r.epsilon == *epsilon).collect();
        let n = cell.len() as f64;
        let rmse = (cell.iter().map(|r| r.abs_error * r.abs_error).sum::<f64>() / n).sqrt();
        let mean_evals = cell.iter().map(|r| r.inner_evals as f64).sum::<f64>() / n;
        let mean_time_s = cell.iter().map(|r| r.wall_time_s).sum::<f64>() / n;
        summary_rows.push(SummaryRow {
            scheme: scheme.clone(),
            epsilon: *epsilon,
            runs: cell.len() as u32,
            rmse,
            mean_evals,
            mean_time_s,
        });
    }

    let mut scheme_order: Vec<String> = Vec::new();
    for (scheme, _) in &order {
        if !scheme_order.contains(scheme) {
            scheme_order.push(scheme.clone());
        }
    }

    let slopes = scheme_order
        .iter()
        .map(|scheme| {
            let cells: Vec<&SummaryRow> =
                summary_rows.iter().filter(|r| &r.scheme == scheme).collect();
            let fit = |points: Vec<(f64, f64)>| -> Option<SlopeFit> {
                fit_loglog(&points).ok().map(SlopeFit::from)
            };
            SchemeSlopes {
                scheme: scheme.clone(),
                evals_vs_eps: fit(cells.iter().map(|r| (r.epsilon, r.mean_evals)).collect()),
                time_vs_eps: fit(cells.iter().map(|r| (r.epsilon, r.mean_time_s)).collect()),
                evals_vs_rmse: fit(cells.iter().map(|r| (r.rmse, r.mean_evals)).collect()),
                time_vs_rmse: fit(cells.iter().map(|r| (r.rmse, r.mean_time_s)).collect()),
            }
        })
        .collect();

    Summary { rows: summary_rows, slopes }
}
