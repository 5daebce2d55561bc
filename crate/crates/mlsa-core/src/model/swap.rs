//! Black-Scholes interest rate swap held short, marked at a horizon τ before
//! the first coupon date.

use super::NestedLossModel;
use crate::error::{Error, Result};
use crate::normal::{inv_norm_cdf, standard_normal};
use alloc::vec::Vec;
use rand_core::RngCore;

/// Realized outer scenario: the lognormal factor of the underlying at τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapScenario {
    /// `Y = exp(-σ̄²τ/2 + σ̄√τ·U₀)` with `U₀ ~ N(0,1)`.
    pub y: f64,
}

/// The swap loss model.
///
/// Cash flows `Δ_i(S_{T_{i-1}} - K̄)` are paid at dates `T_1 < … < T_d`; the
/// strike cancels from the loss and is not a parameter. The conditional loss
/// is `N̄·A·S₀·(Y - 1)` with annuity `A = Σ_{i=2}^d e^{-r̄T_i}·Δ_i·e^{κ̄T_{i-1}}`,
/// so exact simulation and the closed-form VaR are both available.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapModel {
    s0: f64,
    r_bar: f64,
    kappa_bar: f64,
    sigma_bar: f64,
    tau: f64,
    nominal: f64,
    coupon_times: Vec<f64>,
    // e^{-r̄T_i}·Δ_i·e^{κ̄T_{i-1}} for i = 2..d
    coeffs: Vec<f64>,
    // lognormal parameters of Z_1..Z_{d-1}
    inner_drift: Vec<f64>,
    inner_vol: Vec<f64>,
    outer_drift: f64,
    outer_vol: f64,
    annuity: f64,
}

/// Constructor parameters for [`SwapModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapParams {
    /// Spot of the underlying rate.
    pub s0: f64,
    /// Risk-free rate r̄.
    pub r_bar: f64,
    /// Risk-neutral drift κ̄ of the underlying.
    pub kappa_bar: f64,
    /// Volatility σ̄ of the underlying.
    pub sigma_bar: f64,
    /// Swap maturity `T = T_d`.
    pub maturity: f64,
    /// Spacing of the coupon dates.
    pub coupon_interval: f64,
    /// Loss horizon in 30/360 days, so `τ = tau_days/360`.
    pub tau_days: f64,
    /// Nominal N̄.
    pub nominal: f64,
}

impl SwapModel {
    /// Builds the model from a regular coupon schedule.
    pub fn new(params: SwapParams) -> Result<Self> {
        let SwapParams { s0, r_bar, kappa_bar, sigma_bar, maturity, coupon_interval, tau_days, nominal } =
            params;
        if !(coupon_interval > 0.0) || !(maturity > 0.0) {
            return Err(Error::InvalidParameter("swap schedule must have positive dates"));
        }
        let d = libm::round(maturity / coupon_interval) as usize;
        if d < 2 || (d as f64 * coupon_interval - maturity).abs() > 1e-9 * maturity {
            return Err(Error::InvalidParameter(
                "swap maturity must be an integer multiple (>= 2) of the coupon interval",
            ));
        }
        let coupon_times: Vec<f64> = (1..=d).map(|i| i as f64 * coupon_interval).collect();
        Self::with_schedule(s0, r_bar, kappa_bar, sigma_bar, coupon_times, tau_days / 360.0, nominal)
    }

    /// Builds the model from explicit coupon dates `T_1 < … < T_d`.
    pub fn with_schedule(
        s0: f64,
        r_bar: f64,
        kappa_bar: f64,
        sigma_bar: f64,
        coupon_times: Vec<f64>,
        tau: f64,
        nominal: f64,
    ) -> Result<Self> {
        if !(s0 > 0.0) {
            return Err(Error::InvalidParameter("swap spot must be positive"));
        }
        if !(sigma_bar >= 0.0) {
            return Err(Error::InvalidParameter("swap volatility must be non-negative"));
        }
        if !(nominal > 0.0) {
            return Err(Error::InvalidParameter("swap nominal must be positive"));
        }
        if coupon_times.len() < 2 {
            return Err(Error::InvalidParameter("swap needs at least two coupon dates"));
        }
        if coupon_times[0] <= 0.0 || coupon_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("coupon dates must be positive and increasing"));
        }
        if !(tau > 0.0 && tau < coupon_times[0]) {
            return Err(Error::InvalidParameter("horizon tau must lie in (0, T_1)"));
        }

        let d = coupon_times.len();
        let mut coeffs = Vec::with_capacity(d - 1);
        for i in 1..d {
            let delta = coupon_times[i] - coupon_times[i - 1];
            coeffs.push(
                libm::exp(-r_bar * coupon_times[i]) * delta * libm::exp(kappa_bar * coupon_times[i - 1]),
            );
        }
        let annuity = coeffs.iter().sum();

        // Z_1 spans (τ, T_1]; Z_j spans (T_{j-1}, T_j] for j >= 2.
        let mut inner_drift = Vec::with_capacity(d - 1);
        let mut inner_vol = Vec::with_capacity(d - 1);
        for j in 0..d - 1 {
            let span = if j == 0 {
                coupon_times[0] - tau
            } else {
                coupon_times[j] - coupon_times[j - 1]
            };
            inner_drift.push(-0.5 * sigma_bar * sigma_bar * span);
            inner_vol.push(sigma_bar * libm::sqrt(span));
        }

        Ok(Self {
            s0,
            r_bar,
            kappa_bar,
            sigma_bar,
            tau,
            nominal,
            coupon_times,
            coeffs,
            inner_drift,
            inner_vol,
            outer_drift: -0.5 * sigma_bar * sigma_bar * tau,
            outer_vol: sigma_bar * libm::sqrt(tau),
            annuity,
        })
    }

    /// Annuity `A = Σ_{i=2}^d e^{-r̄T_i}·Δ_i·e^{κ̄T_{i-1}}`.
    pub fn annuity(&self) -> f64 {
        self.annuity
    }

    /// Loss horizon τ in years.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Inner payoff `φ(y, z) = N̄·S₀·Σ_{i=2}^d coeff_i·(y·z_1⋯z_{i-1} - 1)`.
    pub fn payoff(&self, y: f64, zs: &[f64]) -> f64 {
        debug_assert_eq!(zs.len(), self.coeffs.len());
        let mut running = y;
        let mut sum = 0.0;
        for (coeff, z) in self.coeffs.iter().zip(zs) {
            running *= z;
            sum += coeff * (running - 1.0);
        }
        self.nominal * self.s0 * sum
    }

    /// Exact conditional loss `E[X₀ | Y = y] = N̄·A·S₀·(y - 1)`.
    pub fn conditional_loss(&self, y: f64) -> f64 {
        self.nominal * self.annuity * self.s0 * (y - 1.0)
    }
}

impl NestedLossModel for SwapModel {
    type Outer = SwapScenario;

    fn draw_outer<R: RngCore + ?Sized>(&self, rng: &mut R) -> SwapScenario {
        let u = standard_normal(rng);
        SwapScenario { y: libm::exp(self.outer_drift + self.outer_vol * u) }
    }

    fn inner_payoff<R: RngCore + ?Sized>(&self, outer: &SwapScenario, rng: &mut R) -> f64 {
        let mut running = outer.y;
        let mut sum = 0.0;
        for ((coeff, drift), vol) in self.coeffs.iter().zip(&self.inner_drift).zip(&self.inner_vol) {
            let z = libm::exp(drift + vol * standard_normal(rng));
            running *= z;
            sum += coeff * (running - 1.0);
        }
        self.nominal * self.s0 * sum
    }

    fn exact_loss<R: RngCore + ?Sized>(&self, rng: &mut R) -> Option<f64> {
        let u = standard_normal(rng);
        Some(self.conditional_loss(libm::exp(self.outer_drift + self.outer_vol * u)))
    }

    fn analytical_var(&self, alpha: f64) -> Option<f64> {
        let q = inv_norm_cdf(alpha).ok()?;
        let y = libm::exp(q * self.outer_vol + self.outer_drift);
        Some(self.conditional_loss(y))
    }
}
