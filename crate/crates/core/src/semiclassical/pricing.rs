//! Single-quadrature call price from the semiclassical kernel.

use std::cell::Cell;
use std::time::Instant;

use crate::error::{PricingError, QuadratureError};
use crate::market::{
    degenerate_quote, intrinsic_value, validate_request, Diagnostics, Engine, PriceQuote, PricingRequest,
};
use crate::quadrature::{integrate_adaptive, integrate_upper_semi_infinite_scaled, IntegrationResult, QuadratureSpec};

use super::path::{transform_spot, TransformedModel};
use super::propagator::{kernel_at, ExponentMode, KernelStatus, SemiclassicalConfig, NORMALIZATION};

/// Fraction of branch-invalid evaluations above which a quote is flagged.
pub const MAX_INVALID_FRACTION: f64 = 1e-3;

/// Half-width, in units of `width`, of the panel placed over the bulk of the kernel.
const BULK_WIDTHS: f64 = 8.0;

/// Integrates over `[lower, inf)`, splitting at `center +- 8 width` so the
/// bulk of a narrow integrand always sits inside a finite panel; the
/// remainder goes through the rational semi-infinite map.
pub(crate) fn integrate_pricing_domain<F>(
    f: F,
    lower: f64,
    center: f64,
    width: f64,
    spec: &QuadratureSpec,
) -> Result<IntegrationResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let mut cuts = vec![lower];
    for c in [center - BULK_WIDTHS * width, center + BULK_WIDTHS * width] {
        if c > *cuts.last().expect("non-empty") {
            cuts.push(c);
        }
    }
    let mut total = IntegrationResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };
    for pair in cuts.windows(2) {
        total = total.combine(integrate_adaptive(&f, pair[0], pair[1], spec)?);
    }
    let tail_start = *cuts.last().expect("non-empty");
    total = total.combine(integrate_upper_semi_infinite_scaled(&f, tail_start, width, spec)?);
    Ok(total)
}

/// European call under CEV by integrating payoff against the semiclassical kernel.
pub fn price_call_semiclassical(req: &PricingRequest, cfg: &SemiclassicalConfig) -> Result<PriceQuote, PricingError> {
    let started = Instant::now();
    let req = validate_request(*req, Engine::Semiclassical)?;
    if let Some(q) = degenerate_quote(&req, Engine::Semiclassical, started) {
        return Ok(q);
    }
    let model = TransformedModel::new(&req.scenario, req.tau)?;
    if model.is_singular() {
        let diag = Diagnostics::new().with("intrinsic", "singular_boundary");
        return Ok(PriceQuote::new(
            intrinsic_value(&req),
            Engine::Semiclassical,
            started,
            diag,
        ));
    }

    let beta = model.beta;
    let strike = req.strike();
    let y0 = transform_spot(req.spot(), beta);
    let (lower, payoff): (f64, Box<dyn Fn(f64) -> f64>) = match cfg.exponent_mode {
        ExponentMode::TransformConsistent => (strike.powf(beta), Box::new(move |y: f64| y.powf(1.0 / beta) - strike)),
        ExponentMode::PaperLiteral => (strike.powf(1.0 / beta), Box::new(move |y: f64| y.powf(beta) - strike)),
    };

    let evaluations = Cell::new(0usize);
    let branch_invalid = Cell::new(0usize);
    let non_positive = Cell::new(0usize);
    let integrand = |y_t: f64| {
        evaluations.set(evaluations.get() + 1);
        let pay = payoff(y_t);
        if !(pay > 0.0) {
            return 0.0;
        }
        let k = kernel_at(&model, y0, y_t, cfg);
        match k.status {
            KernelStatus::Valid => {
                // exp(-A) * payoff can be 0 * inf far in the tail.
                let v = (k.log_kernel() + pay.ln()).exp();
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            }
            KernelStatus::BranchInvalid => {
                branch_invalid.set(branch_invalid.get() + 1);
                0.0
            }
            KernelStatus::NonPositiveDeterminant => {
                non_positive.set(non_positive.get() + 1);
                0.0
            }
        }
    };

    let growth = model.growth();
    let center = y0 * growth;
    let width = (beta * req.sigma() * (y0 * req.tau).sqrt() * growth).max(1e-8 * center.max(1.0));
    let result = integrate_pricing_domain(integrand, lower, center, width, &cfg.quad)?;

    let discount = if cfg.discount {
        (-req.rate() * req.tau).exp()
    } else {
        1.0
    };
    let price = discount * result.value;

    let n = evaluations.get().max(1);
    let invalid = branch_invalid.get() + non_positive.get();
    let trustworthy = (invalid as f64) / (n as f64) <= MAX_INVALID_FRACTION;
    let mut diag = Diagnostics::new()
        .with("exponent_mode", cfg.exponent_mode.as_str())
        .with("vanvleck", cfg.vanvleck_mode.as_str())
        .with("normalization", NORMALIZATION)
        .with("discount", if cfg.discount { "exp(-r*tau)" } else { "none" })
        .with("evaluations", n)
        .with("error_estimate", format!("{:.3e}", result.error_estimate));
    if branch_invalid.get() > 0 {
        diag.push("branch_invalid", branch_invalid.get());
    }
    if non_positive.get() > 0 {
        diag.push("nonpositive_det", non_positive.get());
    }
    if !trustworthy {
        diag.push("trustworthy", false);
    }
    Ok(PriceQuote::new(price, Engine::Semiclassical, started, diag))
}
