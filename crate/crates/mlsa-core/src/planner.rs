//! Planners translating a prescribed accuracy ε into level counts and
//! per-level iteration amounts.
//!
//! The closed forms implement the complexity-optimal choices for each
//! integrability framework, with the theory's `(Kγ₁)^{1/β}`-style prefactor
//! replaced by the single tuned constant `scale_c` of the scheme config.

use crate::error::{Error, Result};
use crate::ladder::BiasLadder;
use crate::refine::Framework;
use crate::scheme::{LevelPlan, SchemeConfig};
use crate::util::ceil_robust;
use alloc::vec::Vec;

/// Level count for MLSA: `L = ⌈ln(h₀/ε)/ln M⌉`, requiring `h₀ > ε`.
pub fn plan_levels_mlsa(ladder: BiasLadder, epsilon: f64) -> Result<u32> {
    let h0 = ladder.h0();
    if !(epsilon > 0.0 && epsilon < h0) {
        return Err(Error::AccuracyTooCoarse { h0, epsilon });
    }
    Ok(ceil_robust(libm::log(h0 / epsilon) / libm::log(ladder.m() as f64)) as u32)
}

/// Level count for the adaptive schemes: `⌈ln(h₀/ε)/((1+θ)ln M)⌉`, requiring
/// `h₀ > ε`. The refinement deepens the effective bias to `h_{ℓ+⌈θℓ⌉}`, so
/// fewer levels reach the same bias target.
pub fn plan_levels_adaptive(ladder: BiasLadder, epsilon: f64, theta: f64) -> Result<u32> {
    let h0 = ladder.h0();
    if !(epsilon > 0.0 && epsilon < h0) {
        return Err(Error::AccuracyTooCoarse { h0, epsilon });
    }
    let denom = (1.0 + theta) * libm::log(ladder.m() as f64);
    Ok(ceil_robust(libm::log(h0 / epsilon) / denom) as u32)
}

/// Statistical-error term ε(h) keyed to the framework.
fn eps_of_h(framework: &Framework, h: f64) -> f64 {
    match framework {
        Framework::LpMoment { p_star, .. } => libm::pow(h, p_star / (2.0 * (1.0 + p_star))),
        Framework::GaussianConcentration => {
            libm::sqrt(h) * libm::sqrt(libm::fabs(libm::log(h)))
        }
        Framework::LipschitzConditionalCdf => libm::sqrt(h),
    }
}

fn ceil_count(x: f64) -> u64 {
    (ceil_robust(x) as u64).max(1)
}

/// Iteration counts for MLSA:
/// `N_ℓ = ⌈C·ε^{-2/β}·(Σ_{ℓ'} h_{ℓ'}^{-β/(1+β)}·ε(h_{ℓ'})^{1/(1+β)})^{1/β}
///        ·h_ℓ^{1/(1+β)}·ε(h_ℓ)^{1/(1+β)}⌉`.
pub fn plan_iterations_mlsa(
    config: &SchemeConfig,
    epsilon: f64,
    levels: u32,
    framework: &Framework,
) -> LevelPlan {
    let beta = config.step.beta();
    let ladder = config.ladder;
    let q = 1.0 / (1.0 + beta);

    let sum: f64 = (0..=levels)
        .map(|l| {
            let h = ladder.bias(l);
            libm::pow(h, -beta * q) * libm::pow(eps_of_h(framework, h), q)
        })
        .sum();
    let prefactor =
        config.scale_c * libm::pow(epsilon, -2.0 / beta) * libm::pow(sum, 1.0 / beta);

    let iterations: Vec<u64> = (0..=levels)
        .map(|l| {
            let h = ladder.bias(l);
            ceil_count(prefactor * libm::pow(h, q) * libm::pow(eps_of_h(framework, h), q))
        })
        .collect();
    LevelPlan { iterations }
}

/// Iteration counts for adMLSA, per framework.
///
/// Under the moment framework the exponents depend on whether the
/// saturation decay δ is below β (prefactor `C·ε^{-2/δ}`) or not
/// (`C·ε^{-2/β}`); the log frameworks share the `h^{(3+θ)/(2(1+β))}` shape,
/// the Gaussian one with extra `|ln h|^{(1+θ)/(2(1+β))}` factors.
pub fn plan_iterations_admlsa(
    config: &SchemeConfig,
    epsilon: f64,
    levels: u32,
    framework: &Framework,
    theta: f64,
) -> LevelPlan {
    let beta = config.step.beta();
    let ladder = config.ladder;

    // Decay rate of the ε prefactor, h exponents of the sum and per-level
    // terms, and the |ln h| exponent carried by the Gaussian branch.
    let (rate, sum_exp, lvl_exp, log_exp) = match framework {
        Framework::LpMoment { p_star, saturation } => {
            let p = *p_star;
            let delta = saturation.delta();
            if delta < beta {
                let denom = 2.0 * (1.0 + p) * (delta + (1.0 + delta) * p);
                let sum_exp = ((3.0 * (1.0 + theta) - 2.0 * delta) * p * p
                    + (2.0 * (1.0 + theta) + delta * (1.0 + 3.0 * theta)) * p
                    + 2.0 * delta * (1.0 + theta))
                    / denom;
                let lvl_exp = ((5.0 + 3.0 * theta) * p + 4.0 + 2.0 * theta) * p / denom;
                (delta, sum_exp, lvl_exp, 0.0)
            } else {
                let denom = 2.0 * (1.0 + p) * (delta + (1.0 + beta) * p);
                let sum_exp = -((2.0 * beta - (1.0 + theta)) * p
                    + (2.0 * beta - (1.0 + theta) * delta))
                    * p
                    / denom;
                let lvl_exp = (2.0 + (3.0 + theta) * p) * p / denom;
                (beta, sum_exp, lvl_exp, 0.0)
            }
        }
        Framework::GaussianConcentration => (
            beta,
            -(2.0 * beta - (1.0 + theta)) / (2.0 * (1.0 + beta)),
            (3.0 + theta) / (2.0 * (1.0 + beta)),
            (1.0 + theta) / (2.0 * (1.0 + beta)),
        ),
        Framework::LipschitzConditionalCdf => (
            beta,
            -(2.0 * beta - (1.0 + theta)) / (2.0 * (1.0 + beta)),
            (3.0 + theta) / (2.0 * (1.0 + beta)),
            0.0,
        ),
    };

    let log_factor = |h: f64, exponent: f64| -> f64 {
        if log_exp == 0.0 {
            1.0
        } else {
            libm::pow(libm::fabs(libm::log(h)), exponent)
        }
    };

    let sum: f64 = (0..=levels)
        .map(|l| {
            let h = ladder.bias(l);
            libm::pow(h, sum_exp) * log_factor(h, log_exp)
        })
        .sum();
    let prefactor =
        config.scale_c * libm::pow(epsilon, -2.0 / rate) * libm::pow(sum, 1.0 / rate);
    let iterations: Vec<u64> = (0..=levels)
        .map(|l| {
            let h = ladder.bias(l);
            ceil_count(prefactor * libm::pow(h, lvl_exp) * log_factor(h, log_exp))
        })
        .collect();
    LevelPlan { iterations }
}

/// Single-level schemes planned by `plan_iterations_single`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleScheme {
    /// Nested SA (also covers plain SA).
    Nsa,
    /// Adaptive nested SA.
    AdNsa,
}

/// Iteration count for the single-level schemes: `⌈C·ε^{-2/β}⌉` for NSA, and
/// for adNSA `⌈C·ε^{-1/δ}⌉` under the moment framework with `δ ≤ β/2`,
/// `⌈C·ε^{-2/β}⌉` otherwise.
pub fn plan_iterations_single(
    scheme: SingleScheme,
    config: &SchemeConfig,
    epsilon: f64,
    framework: Option<&Framework>,
) -> u64 {
    let beta = config.step.beta();
    let exponent = match (scheme, framework) {
        (SingleScheme::AdNsa, Some(Framework::LpMoment { saturation, .. }))
            if saturation.delta() <= beta / 2.0 =>
        {
            -1.0 / saturation.delta()
        }
        _ => -2.0 / beta,
    };
    ceil_count(config.scale_c * libm::pow(epsilon, exponent))
}
