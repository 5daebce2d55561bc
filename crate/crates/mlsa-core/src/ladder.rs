//! Geometric bias ladder `h_ℓ = h₀·M^{-ℓ}` with `h₀ = 1/K`.

use crate::error::{Error, Result};

/// The bias scale of the nested estimators.
///
/// Integer levels index admissible inner sample counts `K·Mˡ`; the
/// real-exponent extension `h_s = h₀·M^{-s}`, `s ∈ ℝ`, is needed by the
/// adaptive refinement thresholds. Sample counts are always derived from
/// integer levels, never by rounding a real bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiasLadder {
    k: u32,
    m: u32,
}

impl BiasLadder {
    /// Builds a ladder with `h₀ = 1/K` and geometric step `M ≥ 2`.
    pub fn new(k: u32, m: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("ladder base K must be positive"));
        }
        if m < 2 {
            return Err(Error::InvalidParameter("ladder step M must be at least 2"));
        }
        Ok(Self { k, m })
    }

    /// Base inner sample count `K`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Geometric step `M`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Coarsest bias `h₀ = 1/K`.
    pub fn h0(&self) -> f64 {
        1.0 / self.k as f64
    }

    /// Bias at real exponent `s ≥ 0`: `h_s = h₀·M^{-s}`.
    pub fn bias_at(&self, s: f64) -> f64 {
        debug_assert!(s >= 0.0, "bias ladder extension is defined for s >= 0");
        self.h0() * libm::pow(self.m as f64, -s)
    }

    /// Bias at integer level ℓ, computed from the exact sample count so the
    /// reciprocal is an exact integer.
    pub fn bias(&self, level: u32) -> f64 {
        1.0 / self.inner_count(level) as f64
    }

    /// Exact inner sample count `K·Mˡ` at integer level ℓ.
    ///
    /// Panics on overflow; in practice levels stay far below the `u64` range.
    pub fn inner_count(&self, level: u32) -> u64 {
        (self.m as u64)
            .checked_pow(level)
            .and_then(|p| p.checked_mul(self.k as u64))
            .expect("inner sample count overflows u64")
    }
}
