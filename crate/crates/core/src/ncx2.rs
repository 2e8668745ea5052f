//! Exact CEV call via the non-central chi-square distribution (Schroder form).

use std::time::Instant;

use crate::error::PricingError;
use crate::market::{degenerate_quote, validate_request, Diagnostics, Engine, PriceQuote, PricingRequest};
use crate::specfun::{noncentral_chi2_cdf, noncentral_chi2_sf, SeriesControl};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ncx2Params {
    /// `k = 2r / (sigma^2 (2 - alpha) (exp(r (2 - alpha) tau) - 1))`.
    pub kappa: f64,
    /// `x = k S0^(2 - alpha) exp(r (2 - alpha) tau)`.
    pub x_arg: f64,
    /// `y = k E^(2 - alpha)`.
    pub y_arg: f64,
}

impl Ncx2Params {
    pub fn new(req: &PricingRequest) -> Self {
        let beta = 2.0 - req.alpha();
        let r = req.rate();
        let em1 = (r * beta * req.tau).exp_m1();
        let kappa = 2.0 * r / (req.sigma() * req.sigma() * beta * em1);
        Self {
            kappa,
            x_arg: kappa * req.spot().powf(beta) * (1.0 + em1),
            y_arg: kappa * req.strike().powf(beta),
        }
    }
}

/// `C = S0 [1 - F(2y; 2 + 2/beta, 2x)] - E exp(-r tau) F(2x; 2/beta, 2y)`.
pub fn price_call_ncx2(req: &PricingRequest, ctl: &SeriesControl) -> Result<PriceQuote, PricingError> {
    let started = Instant::now();
    let req = validate_request(*req, Engine::Ncx2)?;
    if let Some(q) = degenerate_quote(&req, Engine::Ncx2, started) {
        return Ok(q);
    }
    let beta = 2.0 - req.alpha();
    let p = Ncx2Params::new(&req);
    let asset_leg = noncentral_chi2_sf(2.0 * p.y_arg, 2.0 + 2.0 / beta, 2.0 * p.x_arg, ctl)?;
    let strike_leg = noncentral_chi2_cdf(2.0 * p.x_arg, 2.0 / beta, 2.0 * p.y_arg, ctl)?;
    let discount = (-req.rate() * req.tau).exp();
    let raw = req.spot() * asset_leg - req.strike() * discount * strike_leg;
    // Clamp rounding noise into the no-arbitrage band.
    let floor = (req.spot() - req.strike() * discount).max(0.0);
    let price = raw.clamp(floor, req.spot());
    let diag = Diagnostics::new()
        .with("kappa", format!("{:.6e}", p.kappa))
        .with("x", format!("{:.6e}", p.x_arg))
        .with("y", format!("{:.6e}", p.y_arg));
    Ok(PriceQuote::new(price, Engine::Ncx2, started, diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_are_positive() {
        let p = Ncx2Params::new(&PricingRequest::call(100.0, 110.0, 0.05, 0.5, 1.45, 0.5));
        assert!(p.kappa > 0.0 && p.x_arg > 0.0 && p.y_arg > 0.0);
    }

    #[test]
    fn rejects_alpha_two_and_zero_rate() {
        let ctl = SeriesControl::default();
        let err = price_call_ncx2(&PricingRequest::call(100.0, 110.0, 0.05, 0.5, 2.0, 0.5), &ctl).unwrap_err();
        assert!(matches!(err, PricingError::Domain { field: "alpha", .. }));
        let err = price_call_ncx2(&PricingRequest::call(100.0, 110.0, 0.0, 0.5, 1.5, 0.5), &ctl).unwrap_err();
        assert!(matches!(err, PricingError::Domain { field: "rate", .. }));
    }

    #[test]
    fn propagates_series_exhaustion() {
        let ctl = SeriesControl {
            term_tol: 1e-14,
            max_terms: 3,
        };
        let err = price_call_ncx2(&PricingRequest::call(100.0, 110.0, 0.05, 0.5, 1.9, 0.5), &ctl).unwrap_err();
        assert_eq!(err.name(), "SeriesNonConvergence");
    }
}
