//! The five value-at-risk estimators: SA, NSA, MLSA and their adaptive
//! variants adNSA and adMLSA (σ-variants are selected through the
//! [`RefinementConfig`] confidence mode).
//!
//! Every runner is a pure function of `(config, inputs, seed key)`: streams
//! are derived deterministically, levels of a multilevel run use independent
//! child streams, and the reported cost counters are exact evaluation
//! counts.

use crate::error::{Error, Result};
use crate::ladder::BiasLadder;
use crate::model::NestedLossModel;
use crate::refine::{refine_adaptively, RefinementConfig};
use crate::sampler::{sample_coupled_pair, sample_estimate};
use crate::schedule::StepSchedule;
use crate::stream::{SeedKey, StreamRng};
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;
use rand::Rng;

/// Robbins-Monro update direction `H(ξ, x) = 1 - 1_{x ≥ ξ}/(1-α)`.
///
/// The tie `x = ξ` takes the indicator's ≥ branch.
#[inline]
pub fn gradient(alpha: f64, xi: f64, x: f64) -> f64 {
    if x >= xi {
        1.0 - 1.0 / (1.0 - alpha)
    } else {
        1.0
    }
}

/// Rule for the initial iterate ξ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitRule {
    /// Deterministic start; draws nothing from the stream.
    Constant(f64),
    /// Uniform draw from `[lo, hi)`.
    Uniform {
        /// Lower bound.
        lo: f64,
        /// Upper bound.
        hi: f64,
    },
}

impl InitRule {
    fn draw(&self, rng: &mut StreamRng) -> f64 {
        match *self {
            InitRule::Constant(x) => x,
            InitRule::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
        }
    }
}

impl Default for InitRule {
    fn default() -> Self {
        InitRule::Constant(0.0)
    }
}

/// Static parametrization of one estimator run.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    /// Confidence level α of the value-at-risk.
    pub alpha: f64,
    /// Step size schedule γ_n.
    pub step: StepSchedule,
    /// Bias ladder (h₀ = 1/K, geometric step M).
    pub ladder: BiasLadder,
    /// Adaptive refinement parameters, for adNSA/adMLSA.
    pub refinement: Option<RefinementConfig>,
    /// Initial iterate rule.
    pub init: InitRule,
    /// Iteration-count scaling constant of the planners, replacing the
    /// theory's `(Kγ₁)^{1/β}`-style prefactors.
    pub scale_c: f64,
}

impl SchemeConfig {
    /// Builds a config, validating `α ∈ (0, 1)` and `scale_c > 0`.
    pub fn new(alpha: f64, step: StepSchedule, ladder: BiasLadder, scale_c: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidProbability(alpha));
        }
        if !(scale_c > 0.0) || !scale_c.is_finite() {
            return Err(Error::InvalidParameter("scaling constant must be positive"));
        }
        Ok(Self { alpha, step, ladder, refinement: None, init: InitRule::default(), scale_c })
    }

    /// Attaches an adaptive refinement config.
    pub fn with_refinement(mut self, refinement: RefinementConfig) -> Self {
        self.refinement = Some(refinement);
        self
    }

    /// Sets the initial iterate rule.
    pub fn with_init(mut self, init: InitRule) -> Self {
        self.init = init;
        self
    }

    fn refinement(&self) -> Result<&RefinementConfig> {
        self.refinement
            .as_ref()
            .ok_or(Error::InvalidParameter("adaptive scheme needs a refinement config"))
    }
}

/// Iteration counts `N₀..N_L` of a multilevel run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPlan {
    /// One entry per level, all ≥ 1.
    pub iterations: Vec<u64>,
}

impl LevelPlan {
    /// Builds a plan, validating non-emptiness and positive counts.
    pub fn new(iterations: Vec<u64>) -> Result<Self> {
        if iterations.is_empty() {
            return Err(Error::InvalidParameter("level plan needs at least level 0"));
        }
        if iterations.iter().any(|&n| n == 0) {
            return Err(Error::InvalidParameter("iteration counts must be positive"));
        }
        Ok(Self { iterations })
    }

    /// Finest level L.
    pub fn levels(&self) -> u32 {
        (self.iterations.len() - 1) as u32
    }
}

/// Per-level execution record of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelStats {
    /// Level index ℓ.
    pub level: u32,
    /// Iterations performed at this level.
    pub iterations: u64,
    /// Inner payoff evaluations consumed at this level.
    pub inner_evals: u64,
    /// Mean refinement amount η (0 for non-adaptive runs).
    pub mean_eta: f64,
}

/// Outcome of one estimator execution.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRun {
    /// Final iterate (the VaR estimate).
    pub estimate: f64,
    /// Total loss-simulator evaluations: inner payoffs for nested schemes,
    /// exact-loss draws for SA. The primary complexity unit.
    pub inner_evals: u64,
    /// Outer scenario draws.
    pub outer_draws: u64,
    /// Wall time of the run; stamped by the caller, zero from the runners
    /// themselves.
    pub wall_time: Duration,
    /// Raw stream key the run was derived from.
    pub seed: u64,
    /// Per-level records, absent for plain SA.
    pub per_level: Option<Vec<LevelStats>>,
}

/// Unbiased SA on exact loss draws: `ξ_{n+1} = ξ_n - γ_{n+1}H(ξ_n, X₀)`.
pub fn run_sa<M: NestedLossModel>(
    config: &SchemeConfig,
    model: &M,
    n_iters: u64,
    key: SeedKey,
) -> Result<SchemeRun> {
    let mut rng = key.rng();
    let mut xi = config.init.draw(&mut rng);
    for n in 0..n_iters {
        let x = model.exact_loss(&mut rng).ok_or(Error::ExactSimulationUnavailable)?;
        xi -= config.step.at(n + 1) * gradient(config.alpha, xi, x);
    }
    Ok(SchemeRun {
        estimate: xi,
        inner_evals: n_iters,
        outer_draws: n_iters,
        wall_time: Duration::ZERO,
        seed: key.raw(),
        per_level: None,
    })
}

/// Nested SA at bias `h_ℓ`: innovations are inner Monte Carlo averages of
/// `K·Mˡ` payoffs.
pub fn run_nsa<M: NestedLossModel>(
    config: &SchemeConfig,
    model: &M,
    level: u32,
    n_iters: u64,
    key: SeedKey,
) -> Result<SchemeRun> {
    let mut rng = key.rng();
    let (xi, inner, _) = single_level(config, model, level, n_iters, None, &mut rng)?;
    Ok(SchemeRun {
        estimate: xi,
        inner_evals: inner,
        outer_draws: n_iters,
        wall_time: Duration::ZERO,
        seed: key.raw(),
        per_level: Some(vec![LevelStats { level, iterations: n_iters, inner_evals: inner, mean_eta: 0.0 }]),
    })
}

/// Adaptive nested SA: each innovation is refined against the current
/// iterate before the update.
pub fn run_adnsa<M: NestedLossModel>(
    config: &SchemeConfig,
    model: &M,
    level: u32,
    n_iters: u64,
    key: SeedKey,
) -> Result<SchemeRun> {
    if level == 0 {
        return Err(Error::InvalidParameter("adaptive nested SA needs level >= 1"));
    }
    let refinement = config.refinement()?;
    let mut rng = key.rng();
    let (xi, inner, mean_eta) =
        single_level(config, model, level, n_iters, Some(refinement), &mut rng)?;
    Ok(SchemeRun {
        estimate: xi,
        inner_evals: inner,
        outer_draws: n_iters,
        wall_time: Duration::ZERO,
        seed: key.raw(),
        per_level: Some(vec![LevelStats { level, iterations: n_iters, inner_evals: inner, mean_eta }]),
    })
}

/// Multilevel SA: level 0 runs nested SA at `h₀`; every level `ℓ ≥ 1` runs
/// coupled fine/coarse recursions fed by shared innovations, and the final
/// estimate telescopes the per-level differences. Levels consume
/// independent child streams of `key`.
pub fn run_mlsa<M: NestedLossModel>(
    config: &SchemeConfig,
    model: &M,
    plan: &LevelPlan,
    key: SeedKey,
) -> Result<SchemeRun> {
    run_multilevel(config, model, plan, key, None)
}

/// Adaptive multilevel SA: like MLSA, but at each level `ℓ ≥ 1` the coarse
/// and fine innovations are refined separately against their own iterates
/// before the updates. Level 0 is never refined.
pub fn run_admlsa<M: NestedLossModel>(
    config: &SchemeConfig,
    model: &M,
    plan: &LevelPlan,
    key: SeedKey,
) -> Result<SchemeRun> {
    let refinement = config.refinement()?;
    run_multilevel(config, model, plan, key, Some(refinement))
}

fn run_multilevel<M: NestedLossModel>(
    config: &SchemeConfig,
    model: &M,
    plan: &LevelPlan,
    key: SeedKey,
    refinement: Option<&RefinementConfig>,
) -> Result<SchemeRun> {
    let mut per_level = Vec::with_capacity(plan.iterations.len());
    let mut estimate = 0.0;
    let mut inner_total = 0u64;
    let mut outer_total = 0u64;

    for (level, &n_iters) in plan.iterations.iter().enumerate() {
        let level = level as u32;
        let mut rng = key.child(level as u64).rng();
        let (contribution, inner, mean_eta) = if level == 0 {
            single_level(config, model, 0, n_iters, None, &mut rng)?
        } else {
            coupled_level(config, model, level, n_iters, refinement, &mut rng)?
        };
        estimate += contribution;
        inner_total += inner;
        outer_total += n_iters;
        per_level.push(LevelStats { level, iterations: n_iters, inner_evals: inner, mean_eta });
    }

    Ok(SchemeRun {
        estimate,
        inner_evals: inner_total,
        outer_draws: outer_total,
        wall_time: Duration::ZERO,
        seed: key.raw(),
        per_level: Some(per_level),
    })
}

/// One nested recursion at a fixed level, optionally refined. Returns the
/// final iterate, the inner evaluation count and the mean refinement amount.
fn single_level<M: NestedLossModel>(
    config: &SchemeConfig,
    model: &M,
    level: u32,
    n_iters: u64,
    refinement: Option<&RefinementConfig>,
    rng: &mut StreamRng,
) -> Result<(f64, u64, f64)> {
    let mut xi = config.init.draw(rng);
    let mut inner = 0u64;
    let mut eta_sum = 0u64;
    for n in 0..n_iters {
        let est = sample_estimate(model, config.ladder, level, rng);
        let x = match refinement {
            None => {
                inner += est.count();
                est.mean()
            }
            Some(rcfg) => {
                let out = refine_adaptively(rcfg, model, est, xi, n + 1, rng)?;
                inner += out.estimate.count();
                eta_sum += out.eta as u64;
                out.estimate.mean()
            }
        };
        xi -= config.step.at(n + 1) * gradient(config.alpha, xi, x);
    }
    let mean_eta = if n_iters == 0 { 0.0 } else { eta_sum as f64 / n_iters as f64 };
    Ok((xi, inner, mean_eta))
}

/// Coupled fine/coarse recursions at level ℓ ≥ 1 sharing one innovation
/// pair per step. Returns the telescoped difference `ξ_fine - ξ_coarse`, the
/// inner evaluation count and the mean refinement amount across both sides.
fn coupled_level<M: NestedLossModel>(
    config: &SchemeConfig,
    model: &M,
    level: u32,
    n_iters: u64,
    refinement: Option<&RefinementConfig>,
    rng: &mut StreamRng,
) -> Result<(f64, u64, f64)> {
    let mut xi_coarse = config.init.draw(rng);
    let mut xi_fine = config.init.draw(rng);
    let mut inner = 0u64;
    let mut eta_sum = 0u64;

    for n in 0..n_iters {
        let pair = sample_coupled_pair(model, config.ladder, level, rng);
        inner += pair.fine.count();
        let gamma = config.step.at(n + 1);
        match refinement {
            None => {
                xi_coarse -= gamma * gradient(config.alpha, xi_coarse, pair.coarse.mean());
                xi_fine -= gamma * gradient(config.alpha, xi_fine, pair.fine.mean());
            }
            Some(rcfg) => {
                let base = pair.coarse.count();
                let out = refine_adaptively(rcfg, model, pair.coarse, xi_coarse, n + 1, rng)?;
                inner += out.estimate.count() - base;
                eta_sum += out.eta as u64;
                xi_coarse -= gamma * gradient(config.alpha, xi_coarse, out.estimate.mean());

                let base = pair.fine.count();
                let out = refine_adaptively(rcfg, model, pair.fine, xi_fine, n + 1, rng)?;
                inner += out.estimate.count() - base;
                eta_sum += out.eta as u64;
                xi_fine -= gamma * gradient(config.alpha, xi_fine, out.estimate.mean());
            }
        }
    }

    let mean_eta = if n_iters == 0 { 0.0 } else { eta_sum as f64 / (2 * n_iters) as f64 };
    Ok((xi_fine - xi_coarse, inner, mean_eta))
}
