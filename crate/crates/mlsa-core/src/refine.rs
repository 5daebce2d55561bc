//! Adaptive inner-sample refinement.
//!
//! Given a nested estimate at level ℓ and the current iterate ξ, the
//! strategy refines the estimate by ×M echelons until it escapes a shrinking
//! band around ξ, capped at `⌈θℓ⌉` echelons. The band width is `C·ψ_{k,ℓ}ⁿ`
//! where ψ decreases in the echelon `k` and the level ℓ but grows with the
//! recursion rank `n` (the saturation factor): late in the recursion the
//! budget is almost always exhausted, which restores a well-posed convex
//! target problem.

use crate::error::{Error, Result};
use crate::ladder::BiasLadder;
use crate::model::NestedLossModel;
use crate::sampler::{refine_once, RefinableEstimate};
use crate::schedule::{SaturationSchedule, StepSchedule};
use crate::util::ceil_robust;
use alloc::vec::Vec;
use rand_core::RngCore;

/// Integrability framework governing the threshold shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Framework {
    /// Finite p⋆-th conditional moment of the payoff, p⋆ > 1. The threshold
    /// carries the polynomial saturation factor `u_n^{-1/p⋆}`.
    LpMoment {
        /// Moment order p⋆.
        p_star: f64,
        /// Saturation sequence `u_n = γ₁·n^{-δ}`.
        saturation: SaturationSchedule,
    },
    /// Conditional Gaussian concentration of the payoff; logarithmic
    /// saturation factor.
    GaussianConcentration,
    /// Lipschitz-integrable conditional CDF; same logarithmic factor.
    LipschitzConditionalCdf,
}

impl Framework {
    /// p⋆ exponent when the framework carries one.
    pub fn p_star(&self) -> Option<f64> {
        match self {
            Framework::LpMoment { p_star, .. } => Some(*p_star),
            _ => None,
        }
    }

    /// Saturation exponent δ when the framework carries one.
    pub fn delta(&self) -> Option<f64> {
        match self {
            Framework::LpMoment { saturation, .. } => Some(saturation.delta()),
            _ => None,
        }
    }
}

/// Width multiplier of the refinement band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Confidence {
    /// Fixed confidence constant `C_a` (grid-tuned in practice). Zero
    /// disables refinement; infinity forces full refinement.
    Constant {
        /// Confidence constant `C_a ≥ 0`.
        c_a: f64,
    },
    /// Critical value `C_p` scaled by the empirical standard deviation of
    /// the estimate, recomputed after every echelon (the σ-variants; `C_p=3`
    /// targets 99% confidence).
    SigmaScaled {
        /// Critical value `C_p ≥ 0`.
        c_p: f64,
    },
}

/// Full parametrization of the adaptive refinement strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementConfig {
    /// Band width multiplier mode.
    pub confidence: Confidence,
    /// Strictness `r > 1`: larger values refine less readily.
    pub r: f64,
    /// Budget `θ ∈ (0, 1]`: at most `⌈θℓ⌉` echelons at level ℓ.
    pub theta: f64,
    /// Integrability framework selecting the ψ branch.
    pub framework: Framework,
    /// Step schedule supplying `γ_n` to the logarithmic saturation factor.
    pub step: StepSchedule,
    /// Record per-echelon threshold diagnostics (off by default; costs an
    /// allocation per refinement call).
    pub record_thresholds: bool,
}

impl RefinementConfig {
    /// Builds a config, validating `r > 1`, `θ ∈ (0, 1]` and a non-negative
    /// confidence multiplier.
    pub fn new(
        confidence: Confidence,
        r: f64,
        theta: f64,
        framework: Framework,
        step: StepSchedule,
    ) -> Result<Self> {
        if !(r > 1.0) || r.is_nan() {
            return Err(Error::InvalidParameter("refinement strictness r must exceed 1"));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidParameter("refinement budget theta must lie in (0, 1]"));
        }
        let mult = match confidence {
            Confidence::Constant { c_a } => c_a,
            Confidence::SigmaScaled { c_p } => c_p,
        };
        if mult.is_nan() || mult < 0.0 {
            return Err(Error::InvalidParameter("confidence multiplier must be non-negative"));
        }
        Ok(Self { confidence, r, theta, framework, step, record_thresholds: false })
    }

    /// Enables per-echelon threshold diagnostics.
    pub fn with_diagnostics(mut self) -> Self {
        self.record_thresholds = true;
        self
    }
}

/// Heuristic (θ, r) for a framework: `θ = (p⋆/2 - 1)/(p⋆/2 + 1)` under the
/// moment framework (requiring p⋆ > 2), `θ = 1` otherwise, and always
/// `r = 1 + 1/θ`.
pub fn heuristic_parameters(framework: &Framework) -> Result<(f64, f64)> {
    let theta = match framework {
        Framework::LpMoment { p_star, .. } => {
            if !(*p_star > 2.0) {
                return Err(Error::InvalidParameter(
                    "heuristic budget needs p_star > 2 under the moment framework",
                ));
            }
            (p_star / 2.0 - 1.0) / (p_star / 2.0 + 1.0)
        }
        Framework::GaussianConcentration | Framework::LipschitzConditionalCdf => 1.0,
    };
    Ok((theta, 1.0 + 1.0 / theta))
}

/// Refinement budget `⌈θℓ⌉` at level ℓ; level 0 is never refined.
pub fn refinement_budget(theta: f64, level: u32) -> u32 {
    ceil_robust(theta * level as f64) as u32
}

/// Threshold shape `ψ_{k,ℓ}ⁿ`.
///
/// Moment framework: `u_n^{-1/p⋆}·h_{θℓ(r-1)+k}^{1/r}`. Log frameworks:
/// `(ln(γ_n^{-1/2}·h_{ℓ+k}^{-(1+θ)/2}))^{1/2}·h_{θℓ(r-1)+k}^{1/r}`, signalling
/// a configuration error when the logarithm argument is ≤ 1 rather than
/// silently clamping.
pub fn psi(
    config: &RefinementConfig,
    ladder: BiasLadder,
    k: u32,
    level: u32,
    n: u64,
) -> Result<f64> {
    let s = config.theta * level as f64 * (config.r - 1.0) + k as f64;
    let band = libm::pow(ladder.bias_at(s), 1.0 / config.r);
    match &config.framework {
        Framework::LpMoment { p_star, saturation } => {
            Ok(libm::pow(saturation.at(n), -1.0 / p_star) * band)
        }
        Framework::GaussianConcentration | Framework::LipschitzConditionalCdf => {
            let gamma_n = config.step.at(n);
            let h_lk = ladder.bias(level + k);
            let arg = libm::pow(gamma_n, -0.5) * libm::pow(h_lk, -0.5 * (1.0 + config.theta));
            if arg <= 1.0 {
                return Err(Error::ThresholdUndefined { echelon: k, level, rank: n });
            }
            Ok(libm::sqrt(libm::log(arg)) * band)
        }
    }
}

/// Per-echelon diagnostic of one refinement run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdCheck {
    /// Echelon k at which the test was evaluated.
    pub echelon: u32,
    /// Distance `|X - ξ|` of the estimate from the iterate.
    pub distance: f64,
    /// Band width `C·ψ_{k,ℓ}ⁿ` it was compared to.
    pub threshold: f64,
}

/// Result of adaptively refining one estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementOutcome<O> {
    /// Echelons applied, in `[0, ⌈θℓ⌉]`.
    pub eta: u32,
    /// The refined estimate.
    pub estimate: RefinableEstimate<O>,
    /// Diagnostics, empty unless `record_thresholds` is set.
    pub thresholds: Vec<ThresholdCheck>,
}

/// Runs the adaptive refinement loop on a freshly sampled estimate against
/// the iterate `xi` at recursion rank `n ≥ 1`.
///
/// While the budget is not exhausted and `|X - ξ|` sits inside the band
/// `C·ψ_{η,ℓ}ⁿ`, one more ×M echelon is drawn. Level-0 estimates have budget
/// 0 and pass through untouched.
pub fn refine_adaptively<M: NestedLossModel, R: RngCore + ?Sized>(
    config: &RefinementConfig,
    model: &M,
    mut estimate: RefinableEstimate<M::Outer>,
    xi: f64,
    n: u64,
    rng: &mut R,
) -> Result<RefinementOutcome<M::Outer>> {
    debug_assert_eq!(estimate.echelon(), 0, "estimates are refined once, from echelon 0");
    debug_assert!(n >= 1, "recursion ranks are 1-based");

    let level = estimate.base_level();
    let budget = refinement_budget(config.theta, level);
    let mut eta = 0u32;
    let mut thresholds = Vec::new();

    while eta < budget {
        let multiplier = match config.confidence {
            Confidence::Constant { c_a } => c_a,
            Confidence::SigmaScaled { c_p } => c_p * estimate.empirical_std(),
        };
        let threshold = multiplier * psi(config, estimate.ladder(), eta, level, n)?;
        let distance = libm::fabs(estimate.mean() - xi);
        if config.record_thresholds {
            thresholds.push(ThresholdCheck { echelon: eta, distance, threshold });
        }
        if distance >= threshold {
            break;
        }
        refine_once(&mut estimate, model, rng);
        eta += 1;
    }

    Ok(RefinementOutcome { eta, estimate, thresholds })
}
