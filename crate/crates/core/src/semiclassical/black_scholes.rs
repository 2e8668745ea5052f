//! The Black-Scholes case of the semiclassical construction.
//!
//! In log-price `x = ln S` the Lagrangian `[x' - (r - sigma^2/2)]^2 / (2 sigma^2)`
//! is quadratic, the classical path is a straight line and the semiclassical
//! kernel is the exact Gaussian transition density.

use std::f64::consts::PI;
use std::time::Instant;

use crate::error::PricingError;
use crate::market::{degenerate_quote, validate_request, Diagnostics, Engine, PriceQuote, PricingRequest};

use super::hyperdual::{HyperDual, Scalar};
use super::pricing::integrate_pricing_domain;
use super::propagator::SemiclassicalConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsClassicalPath {
    pub x0: f64,
    pub x_t: f64,
    pub rate: f64,
    pub sigma: f64,
    pub tau: f64,
}

impl BsClassicalPath {
    /// Straight line from `x0` at `t = 0` to `xT` at `t = tau`.
    pub fn value(&self, t: f64) -> f64 {
        self.x0 + (self.x_t - self.x0) * t / self.tau
    }

    pub fn action(&self) -> f64 {
        bs_action(self.rate, self.sigma, self.tau, self.x0, self.x_t)
    }

    /// `d^2 A / dx0 dxT`, equal to `-1 / (sigma^2 tau)`.
    pub fn van_vleck(&self) -> f64 {
        bs_action(
            self.rate,
            self.sigma,
            self.tau,
            HyperDual::new(self.x0, 1.0, 0.0, 0.0),
            HyperDual::new(self.x_t, 0.0, 1.0, 0.0),
        )
        .e12
    }

    pub fn kernel(&self) -> f64 {
        (-self.action()).exp() * (-self.van_vleck() / (2.0 * PI)).sqrt()
    }
}

fn bs_action<T: Scalar>(rate: f64, sigma: f64, tau: f64, x0: T, x_t: T) -> T {
    let drift = T::cst(tau * (rate - 0.5 * sigma * sigma));
    let gap = x_t - x0 - drift;
    gap * gap / T::cst(2.0 * sigma * sigma * tau)
}

/// Black-Scholes call priced through the semiclassical kernel and the same
/// quadrature pipeline as the CEV engine.
pub fn price_call_bs_semiclassical(
    req: &PricingRequest,
    cfg: &SemiclassicalConfig,
) -> Result<PriceQuote, PricingError> {
    let started = Instant::now();
    let req = validate_request(*req, Engine::Bs)?;
    if let Some(q) = degenerate_quote(&req, Engine::Semiclassical, started) {
        return Ok(q);
    }
    let (r, sigma, tau, strike) = (req.rate(), req.sigma(), req.tau, req.strike());
    let x0 = req.spot().ln();
    let integrand = |x_t: f64| {
        let path = BsClassicalPath {
            x0,
            x_t,
            rate: r,
            sigma,
            tau,
        };
        let pay = x_t.exp() - strike;
        if pay > 0.0 {
            path.kernel() * pay
        } else {
            0.0
        }
    };
    let center = x0 + tau * (r - 0.5 * sigma * sigma);
    let width = sigma * tau.sqrt();
    let result = integrate_pricing_domain(integrand, strike.ln(), center, width, &cfg.quad)?;
    let price = (-r * tau).exp() * result.value;
    let diag = Diagnostics::new()
        .with("path", "black_scholes")
        .with("error_estimate", format!("{:.3e}", result.error_estimate));
    Ok(PriceQuote::new(price, Engine::Semiclassical, started, diag))
}
