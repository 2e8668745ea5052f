//! European call pricing under the constant elasticity of variance model.
//!
//! Four engines share one request type: closed-form Black-Scholes, a
//! semiclassical path-integral approximation, the exact non-central
//! chi-square formula and a Monte Carlo oracle.

// Negated float comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engine;
pub mod error;
pub mod market;
pub mod mc;
pub mod ncx2;
pub mod quadrature;
pub mod semiclassical;
pub mod specfun;

pub use engine::{price, EngineConfig};
pub use error::{PathError, PricingError, QuadratureError, SpecfunError};
pub use market::{
    bs_call, bs_price, deterministic_value, intrinsic_value, validate_request, Diagnostics, Engine, MarketScenario,
    OptionContract, OptionKind, PriceQuote, PricingRequest, BETA_MIN,
};
pub use mc::{price_call_mc, McConfig, McQuote, McScheme};
pub use ncx2::{price_call_ncx2, Ncx2Params};
pub use quadrature::{IntegrationResult, QuadratureSpec};
pub use semiclassical::{price_call_semiclassical, ExponentMode, SemiclassicalConfig, VanVleckMode};
pub use specfun::SeriesControl;
