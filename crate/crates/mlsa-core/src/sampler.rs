//! Refinable nested Monte Carlo estimates and coupled fine/coarse pairs.
//!
//! A [`RefinableEstimate`] keeps the running sum and sum of squares of the
//! inner payoffs for one outer scenario, so an estimate at bias `h_ℓ` can be
//! refined to `h_{ℓ+1}` by drawing `(M-1)·K·Mˡ` extra payoffs and
//! accumulating; nothing is ever recomputed from scratch and memory stays
//! O(1) per scenario. Sums are compensated (Kahan) so accumulation stays
//! accurate past 10⁶ samples.

use crate::ladder::BiasLadder;
use crate::model::NestedLossModel;
use rand_core::RngCore;

/// Compensated accumulator for the payoff sum and sum of squares.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Accumulator {
    sum: f64,
    sum_c: f64,
    sum_sq: f64,
    sum_sq_c: f64,
}

impl Accumulator {
    #[inline]
    fn add(&mut self, x: f64) {
        kahan_add(&mut self.sum, &mut self.sum_c, x);
        kahan_add(&mut self.sum_sq, &mut self.sum_sq_c, x * x);
    }
}

#[inline]
fn kahan_add(sum: &mut f64, comp: &mut f64, x: f64) {
    let y = x - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// One outer scenario's inner Monte Carlo state.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinableEstimate<O> {
    outer: O,
    ladder: BiasLadder,
    base_level: u32,
    echelon: u32,
    count: u64,
    acc: Accumulator,
}

impl<O: Copy> RefinableEstimate<O> {
    /// Mean of the accumulated payoffs, one draw of `X_{h}` at the current
    /// bias.
    #[inline]
    pub fn mean(&self) -> f64 {
        self.acc.sum / self.count as f64
    }

    /// Number of inner payoffs accumulated, always exactly
    /// `K·M^{base_level + echelon}`.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Lifetime inner payoff evaluations attributed to this estimate
    /// (coincides with [`count`](Self::count)).
    pub fn evals(&self) -> u64 {
        self.count
    }

    /// Level ℓ the estimate was sampled at.
    pub fn base_level(&self) -> u32 {
        self.base_level
    }

    /// Refinements applied since sampling.
    pub fn echelon(&self) -> u32 {
        self.echelon
    }

    /// Effective level `base_level + echelon` of the current bias.
    pub fn current_level(&self) -> u32 {
        self.base_level + self.echelon
    }

    /// Current bias parameter `h = 1/count`.
    pub fn bias(&self) -> f64 {
        1.0 / self.count as f64
    }

    /// The outer scenario this estimate conditions on.
    pub fn outer(&self) -> &O {
        &self.outer
    }

    /// Ladder the estimate lives on.
    pub fn ladder(&self) -> BiasLadder {
        self.ladder
    }

    /// Empirical standard deviation `σ_h = ((1/n)Σφ² - X_h²)^{1/2}` of the
    /// raw inner payoffs, clamped at zero against cancellation.
    pub fn empirical_std(&self) -> f64 {
        let n = self.count as f64;
        let mean = self.acc.sum / n;
        libm::sqrt((self.acc.sum_sq / n - mean * mean).max(0.0))
    }
}

/// Draws one outer scenario and `K·Mˡ` inner payoffs at the given level.
pub fn sample_estimate<M: NestedLossModel, R: RngCore + ?Sized>(
    model: &M,
    ladder: BiasLadder,
    level: u32,
    rng: &mut R,
) -> RefinableEstimate<M::Outer> {
    let outer = model.draw_outer(rng);
    let count = ladder.inner_count(level);
    let mut acc = Accumulator::default();
    for _ in 0..count {
        acc.add(model.inner_payoff(&outer, rng));
    }
    RefinableEstimate { outer, ladder, base_level: level, echelon: 0, count, acc }
}

/// Refines an estimate by one echelon: draws `(M-1)·count` fresh payoffs so
/// the bias drops from `h` to `h/M`, updating the running sums in place.
pub fn refine_once<M: NestedLossModel, R: RngCore + ?Sized>(
    est: &mut RefinableEstimate<M::Outer>,
    model: &M,
    rng: &mut R,
) {
    let extra = est.count * (est.ladder.m() as u64 - 1);
    for _ in 0..extra {
        est.acc.add(model.inner_payoff(&est.outer, rng));
    }
    est.count += extra;
    est.echelon += 1;
}

/// Perfectly coupled fine/coarse estimates sharing one outer scenario.
///
/// The coarse side averages the first `K·M^{ℓ-1}` payoffs; the fine side
/// averages those same payoffs plus `(M-1)·K·M^{ℓ-1}` extra ones, so that
/// `fine.mean() = coarse.mean()/M + (extra sum)/(K·Mˡ)` holds by
/// construction. Both sides refine independently afterwards with fresh
/// draws.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair<O> {
    /// Estimate at level ℓ-1.
    pub coarse: RefinableEstimate<O>,
    /// Estimate at level ℓ, sharing the coarse payoffs.
    pub fine: RefinableEstimate<O>,
}

/// Samples a coupled pair at levels (ℓ-1, ℓ), `ℓ ≥ 1`.
///
/// Costs `K·Mˡ` inner evaluations in total: the coarse payoffs are reused by
/// the fine side.
pub fn sample_coupled_pair<M: NestedLossModel, R: RngCore + ?Sized>(
    model: &M,
    ladder: BiasLadder,
    level: u32,
    rng: &mut R,
) -> CoupledPair<M::Outer> {
    assert!(level >= 1, "coupled pairs need a coarse level below them");
    let outer = model.draw_outer(rng);

    let coarse_count = ladder.inner_count(level - 1);
    let mut acc = Accumulator::default();
    for _ in 0..coarse_count {
        acc.add(model.inner_payoff(&outer, rng));
    }
    let coarse = RefinableEstimate {
        outer,
        ladder,
        base_level: level - 1,
        echelon: 0,
        count: coarse_count,
        acc,
    };

    let fine_count = ladder.inner_count(level);
    let mut acc = coarse.acc;
    for _ in 0..fine_count - coarse_count {
        acc.add(model.inner_payoff(&outer, rng));
    }
    let fine =
        RefinableEstimate { outer, ladder, base_level: level, echelon: 0, count: fine_count, acc };

    CoupledPair { coarse, fine }
}
