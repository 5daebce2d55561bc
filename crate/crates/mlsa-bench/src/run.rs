//! Replicated execution of an experiment plan.

use crate::config::{CellPlan, ExperimentPlan, ModelSpec, RunShape, SchemeKind, SchemePlan};
use mlsa_core::{
    run_admlsa, run_adnsa, run_mlsa, run_nsa, run_sa, NestedLossModel, SchemeRun, SeedKey,
};
use rayon::prelude::*;
use std::time::Instant;

/// One completed (scheme, accuracy, replication) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    /// Scheme label.
    pub scheme: String,
    /// Prescribed accuracy ε.
    pub epsilon: f64,
    /// Replication index.
    pub run: u32,
    /// Final VaR estimate.
    pub estimate: f64,
    /// `|estimate - analytical VaR|`.
    pub abs_error: f64,
    /// Loss-simulator evaluations consumed.
    pub inner_evals: u64,
    /// Wall time of the run in seconds, planning excluded.
    pub wall_time_s: f64,
}

/// A cell whose run failed; recorded, never fatal.
#[derive(Debug, Clone)]
pub struct CellFailure {
    /// Scheme label.
    pub scheme: String,
    /// Prescribed accuracy ε.
    pub epsilon: f64,
    /// Replication index.
    pub run: u32,
    /// Error rendered for the report.
    pub error: String,
}

/// Runs every (scheme, accuracy, replication) cell of the plan on a
/// dedicated thread pool.
///
/// Results are deterministic in `(plan, seed)` for any parallelism: each
/// cell derives its own stream from `hash(master seed, scheme label,
/// accuracy index, replication)` and the output keeps (scheme, accuracy,
/// replication) order.
pub fn execute(plan: &ExperimentPlan, parallelism: usize) -> (Vec<ResultRow>, Vec<CellFailure>) {
    struct Cell<'a> {
        scheme: &'a SchemePlan,
        eps_index: usize,
        cell: &'a CellPlan,
        rep: u32,
    }

    let mut cells = Vec::new();
    for scheme in &plan.schemes {
        for (eps_index, cell) in scheme.cells.iter().enumerate() {
            for rep in 0..plan.replications {
                cells.push(Cell { scheme, eps_index, cell, rep });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .expect("building the execution thread pool");

    let truth = plan.model.analytical_var(plan.alpha);
    let outcomes: Vec<Result<ResultRow, CellFailure>> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| {
                let key = SeedKey::new(plan.seed)
                    .child_str(&c.scheme.label)
                    .child(c.eps_index as u64)
                    .child(c.rep as u64);
                let started = Instant::now();
                let outcome = match &plan.model {
                    ModelSpec::Option(m) => run_cell(c.scheme.kind, c.cell, m, key),
                    ModelSpec::Swap(m) => run_cell(c.scheme.kind, c.cell, m, key),
                };
                match outcome {
                    Ok(run) => {
                        let wall_time_s = started.elapsed().as_secs_f64();
                        Ok(ResultRow {
                            scheme: c.scheme.label.clone(),
                            epsilon: c.cell.epsilon,
                            run: c.rep,
                            estimate: run.estimate,
                            abs_error: truth
                                .map(|t| (run.estimate - t).abs())
                                .unwrap_or(f64::NAN),
                            inner_evals: run.inner_evals,
                            wall_time_s,
                        })
                    }
                    Err(e) => Err(CellFailure {
                        scheme: c.scheme.label.clone(),
                        epsilon: c.cell.epsilon,
                        run: c.rep,
                        error: e.to_string(),
                    }),
                }
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(failure) => failures.push(failure),
        }
    }
    (rows, failures)
}

fn run_cell<M: NestedLossModel>(
    kind: SchemeKind,
    cell: &CellPlan,
    model: &M,
    key: SeedKey,
) -> mlsa_core::Result<SchemeRun> {
    match (&kind, &cell.shape) {
        (SchemeKind::Sa, RunShape::Single { iterations, .. }) => {
            run_sa(&cell.config, model, *iterations, key)
        }
        (SchemeKind::Nsa, RunShape::Single { level, iterations }) => {
            run_nsa(&cell.config, model, *level, *iterations, key)
        }
        (SchemeKind::AdNsa, RunShape::Single { level, iterations }) => {
            run_adnsa(&cell.config, model, *level, *iterations, key)
        }
        (SchemeKind::Mlsa, RunShape::Multi(levels)) => {
            run_mlsa(&cell.config, model, levels, key)
        }
        (SchemeKind::AdMlsa, RunShape::Multi(levels)) => {
            run_admlsa(&cell.config, model, levels, key)
        }
        _ => unreachable!("cell shape mismatches scheme kind; rejected at planning"),
    }
}
