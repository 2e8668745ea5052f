//! One entry point for every engine.

use crate::error::PricingError;
use crate::market::{bs_price, Engine, PriceQuote, PricingRequest};
use crate::mc::{price_call_mc, McConfig};
use crate::ncx2::price_call_ncx2;
use crate::semiclassical::{price_call_semiclassical, SemiclassicalConfig};
use crate::specfun::SeriesControl;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EngineConfig {
    pub semiclassical: SemiclassicalConfig,
    pub series: SeriesControl,
    pub mc: McConfig,
}

pub fn price(req: &PricingRequest, engine: Engine, cfg: &EngineConfig) -> Result<PriceQuote, PricingError> {
    match engine {
        Engine::Bs => bs_price(req),
        Engine::Semiclassical => price_call_semiclassical(req, &cfg.semiclassical),
        Engine::Ncx2 => price_call_ncx2(req, &cfg.series),
        Engine::Mc => price_call_mc(req, &cfg.mc).map(|q| q.to_price_quote()),
    }
}
