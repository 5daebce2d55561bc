//! Loss models exposing the nested structure `X₀ = E[φ(Y,Z)|Y]`.

mod option;
mod swap;

pub use option::{OptionModel, OptionScenario};
pub use swap::{SwapModel, SwapParams, SwapScenario};

use rand_core::RngCore;

/// A loss that can be simulated through inner/outer nested Monte Carlo.
///
/// `inner_payoff` draws one folded inner payoff whose `K`-average is the
/// nested estimator `X_h`; any affine constants of the loss are absorbed in
/// the payoff so the estimator is always a plain average. Given a fixed
/// outer scenario, successive payoff draws are i.i.d. and their expectation
/// is the exact conditional loss.
pub trait NestedLossModel {
    /// Realized outer randomness, kept opaque to the estimation schemes.
    type Outer: Copy + core::fmt::Debug + PartialEq;

    /// Draws one outer scenario `Y`.
    fn draw_outer<R: RngCore + ?Sized>(&self, rng: &mut R) -> Self::Outer;

    /// Draws one inner payoff conditional on the outer scenario.
    fn inner_payoff<R: RngCore + ?Sized>(&self, outer: &Self::Outer, rng: &mut R) -> f64;

    /// Draws the loss `X₀` exactly, when the model admits it.
    fn exact_loss<R: RngCore + ?Sized>(&self, rng: &mut R) -> Option<f64>;

    /// Closed-form value-at-risk at confidence `alpha`, when available.
    fn analytical_var(&self, alpha: f64) -> Option<f64>;
}
