//! Benchmark harness around `mlsa-core`: experiment configs, replicated
//! execution, RMSE/complexity summaries and CSV/JSON/SVG outputs.

pub mod config;
pub mod emit;
pub mod run;
pub mod summary;
pub mod svg;

pub use config::{load_plan, CellPlan, ExperimentPlan, ModelSpec, RunShape, SchemeKind, SchemePlan};
pub use emit::{load_rows_csv, write_rows_csv, write_summary_json};
pub use run::{execute, CellFailure, ResultRow};
pub use summary::{summarize, SchemeSlopes, Summary, SummaryRow};

use thiserror::Error;

/// Harness-level error type.
#[derive(Debug, Error)]
pub enum BenchError {
    /// Configuration file could not be read.
    #[error("cannot read {path}: {source}")]
    Io {
        /// Offending path.
        path: String,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
    /// Configuration file could not be parsed.
    #[error("cannot parse {path}: {source}")]
    Parse {
        /// Offending path.
        path: String,
        /// Underlying TOML error.
        #[source]
        source: Box<toml::de::Error>,
    },
    /// Configuration violated an invariant.
    #[error("invalid config: {0}")]
    Invalid(String),
    /// Core-library error while planning.
    #[error("planning failed: {0}")]
    Core(#[from] mlsa_core::Error),
    /// Malformed rows CSV.
    #[error("cannot parse rows csv at line {line}: {reason}")]
    Csv {
        /// 1-based line number.
        line: usize,
        /// What went wrong.
        reason: String,
    },
}
