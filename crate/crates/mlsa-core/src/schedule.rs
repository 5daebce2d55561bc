//! Step size and saturation schedules.

use crate::error::{Error, Result};

/// Robbins-Monro step size sequence `γ_n = a·(b + n)^{-β}`.
///
/// The theory works with the pure power law `γ_n = γ₁·n^{-β}` (`b = 0`);
/// experiments typically shift the index, e.g. `γ_n = 2/(2500 + n)`. Both
/// shapes are covered here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    a: f64,
    b: f64,
    beta: f64,
}

impl StepSchedule {
    /// Builds a schedule, validating `a > 0`, `b ≥ 0` and `0 < β ≤ 1`.
    pub fn new(a: f64, b: f64, beta: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter("step scale a must be positive"));
        }
        if !(b >= 0.0) || !b.is_finite() {
            return Err(Error::InvalidParameter("step shift b must be non-negative"));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidParameter("step decay beta must lie in (0, 1]"));
        }
        Ok(Self { a, b, beta })
    }

    /// Pure power law `γ_n = γ₁·n^{-β}`.
    pub fn power_law(gamma1: f64, beta: f64) -> Result<Self> {
        Self::new(gamma1, 0.0, beta)
    }

    /// Step size at rank `n ≥ 1`.
    pub fn at(&self, n: u64) -> f64 {
        debug_assert!(n >= 1, "step schedule is defined for n >= 1");
        let base = self.b + n as f64;
        if self.beta == 1.0 {
            self.a / base
        } else {
            self.a * libm::pow(base, -self.beta)
        }
    }

    /// Scale `a` (the `γ₁`-like constant).
    pub fn scale(&self) -> f64 {
        self.a
    }

    /// Index shift `b`.
    pub fn shift(&self) -> f64 {
        self.b
    }

    /// Decay exponent β.
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Saturation sequence `u_n = γ₁·n^{-δ}` entering the adaptive refinement
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationSchedule {
    gamma1: f64,
    delta: f64,
}

impl SaturationSchedule {
    /// Builds a schedule, validating `γ₁ > 0` and `0 < δ ≤ 1`.
    pub fn new(gamma1: f64, delta: f64) -> Result<Self> {
        if !(gamma1 > 0.0) || !gamma1.is_finite() {
            return Err(Error::InvalidParameter("saturation gamma1 must be positive"));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParameter("saturation delta must lie in (0, 1]"));
        }
        Ok(Self { gamma1, delta })
    }

    /// Saturation value at rank `n ≥ 1`.
    pub fn at(&self, n: u64) -> f64 {
        debug_assert!(n >= 1, "saturation schedule is defined for n >= 1");
        if self.delta == 1.0 {
            self.gamma1 / n as f64
        } else {
            self.gamma1 * libm::pow(n as f64, -self.delta)
        }
    }

    /// Decay exponent δ.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Scale γ₁.
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }
}
