//! Flat-file outputs: result rows as CSV, summaries as versioned JSON.
//!
//! The CSV column order is a contract
//! (`scheme,epsilon,run,estimate,abs_error,inner_evals,wall_time_s`) and
//! floats are written with Rust's shortest round-trip formatting, so reruns
//! with the same seed produce byte-identical files apart from the wall_time
//! column.

use crate::run::ResultRow;
use crate::summary::Summary;
use crate::BenchError;
use serde::{Deserialize, Serialize};
use std::io::{BufWriter, Write};
use std::path::Path;

/// Fixed CSV header of the rows file.
pub const ROWS_HEADER: &str = "scheme,epsilon,run,estimate,abs_error,inner_evals,wall_time_s";

/// Writes result rows to CSV with the fixed column contract.
pub fn write_rows_csv(path: &Path, rows: &[ResultRow]) -> Result<(), BenchError> {
    let io_err = |source| BenchError::Io { path: path.display().to_string(), source };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        writeln!(out, "{ROWS_HEADER}")?;
        for r in rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.scheme, r.epsilon, r.run, r.estimate, r.abs_error, r.inner_evals, r.wall_time_s
            )?;
        }
        out.flush()
    };
    write().map_err(io_err)
}

/// Renders the rows CSV in memory (used to check byte-level determinism).
pub fn rows_csv_string(rows: &[ResultRow]) -> String {
    let mut s = String::from(ROWS_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.scheme, r.epsilon, r.run, r.estimate, r.abs_error, r.inner_evals, r.wall_time_s
        ));
    }
    s
}

/// Loads result rows back from CSV.
pub fn load_rows_csv(path: &Path) -> Result<Vec<ResultRow>, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_rows_csv(&text)
}

/// Parses the rows CSV format.
pub fn parse_rows_csv(text: &str) -> Result<Vec<ResultRow>, BenchError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == ROWS_HEADER => {}
        _ => {
            return Err(BenchError::Csv {
                line: 1,
                reason: format!("expected header '{ROWS_HEADER}'"),
            })
        }
    }

    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(BenchError::Csv {
                line: i + 1,
                reason: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let bad = |what: &str| BenchError::Csv { line: i + 1, reason: format!("bad {what}") };
        rows.push(ResultRow {
            scheme: fields[0].to_string(),
            epsilon: fields[1].parse().map_err(|_| bad("epsilon"))?,
            run: fields[2].parse().map_err(|_| bad("run"))?,
            estimate: fields[3].parse().map_err(|_| bad("estimate"))?,
            abs_error: fields[4].parse().map_err(|_| bad("abs_error"))?,
            inner_evals: fields[5].parse().map_err(|_| bad("inner_evals"))?,
            wall_time_s: fields[6].parse().map_err(|_| bad("wall_time_s"))?,
        });
    }
    Ok(rows)
}

/// Versioned summary document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryDoc {
    /// Schema version, currently 1.
    pub schema: u32,
    /// Experiment name.
    pub name: String,
    /// The summary payload.
    #[serde(flatten)]
    pub summary: Summary,
}

/// Writes the summary as versioned JSON.
pub fn write_summary_json(path: &Path, name: &str, summary: &Summary) -> Result<(), BenchError> {
    let io_err = |source| BenchError::Io { path: path.display().to_string(), source };
    let doc = SummaryDoc { schema: 1, name: name.to_string(), summary: summary.clone() };
    let text = serde_json::to_string_pretty(&doc).expect("summary serializes");
    std::fs::write(path, text).map_err(io_err)
}

/// Reads a summary document back.
pub fn load_summary_json(path: &Path) -> Result<SummaryDoc, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| BenchError::Invalid(format!("bad summary json: {e}")))
}
