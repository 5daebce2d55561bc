//! Monte Carlo estimation of value-at-risk for losses that are only
//! simulatable through nested (inner/outer) sampling.
//!
//! The crate provides five stochastic approximation estimators of the
//! α-quantile of a loss `X₀ = E[φ(Y,Z)|Y]`:
//!
//! - [`scheme::run_sa`]: the unbiased Robbins-Monro recursion, available when
//!   the loss can be simulated exactly,
//! - [`scheme::run_nsa`]: nested SA driven by inner Monte Carlo averages with
//!   bias parameter `h = 1/(K·Mˡ)`,
//! - [`scheme::run_mlsa`]: multilevel SA telescoping coupled nested recursions
//!   across a geometric bias ladder,
//! - [`scheme::run_adnsa`] and [`scheme::run_admlsa`]: the adaptive variants,
//!   which enlarge each inner sample by ×M echelons until the estimate clears
//!   a shrinking threshold band around the current iterate.
//!
//! Supporting machinery lives in dedicated modules: bias ladders and step
//! schedules ([`ladder`], [`schedule`]), refinable nested estimates and
//! coupled fine/coarse pairs ([`sampler`]), the adaptive refinement strategy
//! itself ([`refine`]), accuracy-to-iteration planners ([`planner`]), the two
//! reference loss models ([`model`]), and small numerical kernels
//! ([`normal`], [`regression`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature for embedded or sandboxed use. All floating point math goes
//! through `libm` so results are identical across both modes.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]
// Validation guards are written `!(x > 0.0)` so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod ladder;
pub mod model;
pub mod normal;
pub mod planner;
pub mod refine;
pub mod regression;
pub mod sampler;
pub mod schedule;
pub mod scheme;
pub mod stream;

pub use error::{Error, Result};
pub use ladder::BiasLadder;
pub use model::{
    NestedLossModel, OptionModel, OptionScenario, SwapModel, SwapParams, SwapScenario,
};
pub use normal::{inv_norm_cdf, norm_cdf, standard_normal};
pub use planner::{
    plan_iterations_admlsa, plan_iterations_mlsa, plan_iterations_single, plan_levels_adaptive,
    plan_levels_mlsa, SingleScheme,
};
pub use refine::{
    heuristic_parameters, psi, refine_adaptively, refinement_budget, Confidence, Framework,
    RefinementConfig, RefinementOutcome, ThresholdCheck,
};
pub use regression::{fit_loglog, PowerLawFit};
pub use sampler::{refine_once, sample_coupled_pair, sample_estimate, CoupledPair, RefinableEstimate};
pub use schedule::{SaturationSchedule, StepSchedule};
pub use scheme::{
    gradient, run_admlsa, run_adnsa, run_mlsa, run_nsa, run_sa, InitRule, LevelPlan, LevelStats,
    SchemeConfig, SchemeRun,
};
pub use stream::{SeedKey, StreamRng};

pub(crate) mod util {
    /// Ceiling with a tolerance absorbing accumulated floating point error,
    /// so that expressions whose exact value is an integer (e.g. `⌈θℓ⌉` with
    /// rational θ, or `ln(h₀/ε)/ln M` on a dyadic grid) do not round up to
    /// the next integer.
    pub(crate) fn ceil_robust(x: f64) -> f64 {
        let tol = 1e-9_f64.max(x.abs() * 1e-12);
        libm::ceil(x - tol)
    }
}
