//! European option on a Brownian underlying, with payoff `x ↦ -x²` at
//! maturity 1 and loss horizon τ.

use super::NestedLossModel;
use crate::error::{Error, Result};
use crate::normal::{inv_norm_cdf, standard_normal};
use rand_core::RngCore;

/// Realized outer scenario: the normalized Brownian increment up to τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionScenario {
    /// Standard normal draw generating `W_τ = √τ·y`.
    pub y: f64,
}

/// The option loss model.
///
/// The conditional loss is `X₀ = τ(Y² - 1)` with `Y ~ N(0,1)`, so both exact
/// simulation and the closed-form VaR are available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionModel {
    tau: f64,
    sqrt_tau: f64,
    sqrt_comp: f64,
}

impl OptionModel {
    /// Builds the model for a loss horizon `τ ∈ (0, 1)`.
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidParameter("option horizon tau must lie in (0, 1)"));
        }
        Ok(Self {
            tau,
            sqrt_tau: libm::sqrt(tau),
            sqrt_comp: libm::sqrt(1.0 - tau),
        })
    }

    /// Loss horizon τ.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Folded inner payoff `-1 - φ(y, z) = -1 + (√τ·y + √(1-τ)·z)²`.
    ///
    /// The affine `-1` of the loss is absorbed here so the nested estimator
    /// is a plain average of payoffs.
    pub fn payoff(&self, y: f64, z: f64) -> f64 {
        let w = self.sqrt_tau * y + self.sqrt_comp * z;
        -1.0 + w * w
    }

    /// Exact conditional loss `E[X₀ | Y = y] = τ(y² - 1)`.
    pub fn conditional_loss(&self, y: f64) -> f64 {
        self.tau * (y * y - 1.0)
    }
}

impl NestedLossModel for OptionModel {
    type Outer = OptionScenario;

    fn draw_outer<R: RngCore + ?Sized>(&self, rng: &mut R) -> OptionScenario {
        OptionScenario { y: standard_normal(rng) }
    }

    fn inner_payoff<R: RngCore + ?Sized>(&self, outer: &OptionScenario, rng: &mut R) -> f64 {
        self.payoff(outer.y, standard_normal(rng))
    }

    fn exact_loss<R: RngCore + ?Sized>(&self, rng: &mut R) -> Option<f64> {
        let y = standard_normal(rng);
        Some(self.conditional_loss(y))
    }

    fn analytical_var(&self, alpha: f64) -> Option<f64> {
        let q = inv_norm_cdf((1.0 - alpha) / 2.0).ok()?;
        Some(self.tau * (q * q - 1.0))
    }
}
