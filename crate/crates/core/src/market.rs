//! Contracts, market scenarios, request validation and the Black-Scholes reference.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::PricingError;
use crate::specfun::std_normal_cdf;

/// Smallest admissible `beta = 2 - alpha` for the semiclassical engine.
pub const BETA_MIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OptionKind {
    #[default]
    EuropeanCall,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionContract {
    pub strike: f64,
    /// Maturity `T` in years.
    pub maturity: f64,
    pub kind: OptionKind,
}

impl OptionContract {
    pub fn call(strike: f64, maturity: f64) -> Self {
        Self {
            strike,
            maturity,
            kind: OptionKind::EuropeanCall,
        }
    }
}

/// Spot, rate and CEV parameters. `alpha = 2` is geometric Brownian motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketScenario {
    pub spot: f64,
    pub rate: f64,
    pub sigma: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricingRequest {
    pub scenario: MarketScenario,
    pub contract: OptionContract,
    /// Time to maturity `T - t` in years.
    pub tau: f64,
}

impl PricingRequest {
    /// Request priced at `t = 0`, so `tau` equals the contract maturity.
    pub fn new(scenario: MarketScenario, contract: OptionContract) -> Self {
        Self {
            scenario,
            contract,
            tau: contract.maturity,
        }
    }

    /// Shorthand used throughout tests and the harness.
    pub fn call(spot: f64, strike: f64, rate: f64, sigma: f64, alpha: f64, maturity: f64) -> Self {
        Self::new(
            MarketScenario {
                spot,
                rate,
                sigma,
                alpha,
            },
            OptionContract::call(strike, maturity),
        )
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn spot(&self) -> f64 {
        self.scenario.spot
    }

    pub fn strike(&self) -> f64 {
        self.contract.strike
    }

    pub fn rate(&self) -> f64 {
        self.scenario.rate
    }

    pub fn sigma(&self) -> f64 {
        self.scenario.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.scenario.alpha
    }
}

/// Pricing engines available to the CLI and the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Bs,
    Semiclassical,
    Ncx2,
    Mc,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Bs, Engine::Semiclassical, Engine::Ncx2, Engine::Mc];

    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Bs => "bs",
            Engine::Semiclassical => "semiclassical",
            Engine::Ncx2 => "ncx2",
            Engine::Mc => "mc",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bs" => Ok(Engine::Bs),
            "semiclassical" | "sc" => Ok(Engine::Semiclassical),
            "ncx2" => Ok(Engine::Ncx2),
            "mc" => Ok(Engine::Mc),
            other => Err(format!("unknown engine '{other}'")),
        }
    }
}

/// Ordered key/value metadata attached to a quote.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    entries: Vec<(String, String)>,
}

impl Diagnostics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.push(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceQuote {
    pub price: f64,
    pub engine: Engine,
    /// Elapsed wall time of the pricing call in nanoseconds.
    pub wall_time: u64,
    pub diagnostics: Diagnostics,
}

impl PriceQuote {
    pub(crate) fn new(price: f64, engine: Engine, started: Instant, diagnostics: Diagnostics) -> Self {
        Self {
            price: price.max(0.0),
            engine,
            wall_time: elapsed_ns(started),
            diagnostics,
        }
    }
}

pub(crate) fn elapsed_ns(started: Instant) -> u64 {
    u64::try_from(started.elapsed().as_nanos()).unwrap_or(u64::MAX)
}

fn require(ok: bool, field: &'static str, constraint: &'static str) -> Result<(), PricingError> {
    if ok {
        Ok(())
    } else {
        Err(PricingError::domain(field, constraint))
    }
}

/// Checks the request against the invariants of the chosen engine.
pub fn validate_request(req: PricingRequest, engine: Engine) -> Result<PricingRequest, PricingError> {
    let s = &req.scenario;
    let c = &req.contract;
    require(s.spot.is_finite() && s.spot > 0.0, "spot", "spot > 0")?;
    require(c.strike.is_finite() && c.strike > 0.0, "strike", "strike > 0")?;
    require(c.maturity.is_finite() && c.maturity > 0.0, "maturity", "maturity > 0")?;
    require(req.tau.is_finite() && req.tau >= 0.0, "tau", "tau >= 0")?;
    require(s.sigma.is_finite() && s.sigma >= 0.0, "sigma", "sigma >= 0")?;
    require(s.rate.is_finite(), "rate", "rate finite")?;
    match engine {
        Engine::Bs => {}
        Engine::Mc => require(
            s.alpha.is_finite() && (0.0..=2.0).contains(&s.alpha),
            "alpha",
            "0 <= alpha <= 2",
        )?,
        Engine::Ncx2 => {
            require(
                s.alpha.is_finite() && (0.0..2.0).contains(&s.alpha),
                "alpha",
                "0 <= alpha < 2",
            )?;
            require(s.rate > 0.0, "rate", "rate > 0")?;
        }
        Engine::Semiclassical => {
            require(
                s.alpha.is_finite() && (0.0..2.0).contains(&s.alpha),
                "alpha",
                "0 <= alpha < 2",
            )?;
            require(
                2.0 - s.alpha >= BETA_MIN,
                "alpha",
                "alpha <= 2 - beta_min (use the bs engine near alpha = 2)",
            )?;
            require(s.rate > 0.0, "rate", "rate > 0")?;
        }
    }
    Ok(req)
}

/// `max(S0 - E, 0)`: the `tau -> 0` limit of every engine.
pub fn intrinsic_value(req: &PricingRequest) -> f64 {
    (req.spot() - req.strike()).max(0.0)
}

/// Price when the diffusion vanishes: the spot grows at the risk-free rate.
pub fn deterministic_value(req: &PricingRequest) -> f64 {
    (req.spot() - req.strike() * (-req.rate() * req.tau).exp()).max(0.0)
}

/// Shared short-circuits: `tau = 0` gives intrinsic value, `sigma = 0` the
/// deterministic forward payoff.
pub(crate) fn degenerate_quote(req: &PricingRequest, engine: Engine, started: Instant) -> Option<PriceQuote> {
    if req.tau == 0.0 {
        let diag = Diagnostics::new().with("intrinsic", "tau=0");
        return Some(PriceQuote::new(intrinsic_value(req), engine, started, diag));
    }
    if req.sigma() == 0.0 {
        let diag = Diagnostics::new().with("deterministic", "sigma=0");
        return Some(PriceQuote::new(deterministic_value(req), engine, started, diag));
    }
    None
}

/// Closed-form Black-Scholes call.
pub fn bs_price(req: &PricingRequest) -> Result<PriceQuote, PricingError> {
    let started = Instant::now();
    let req = validate_request(*req, Engine::Bs)?;
    if let Some(q) = degenerate_quote(&req, Engine::Bs, started) {
        return Ok(q);
    }
    let price = bs_call(req.spot(), req.strike(), req.rate(), req.sigma(), req.tau);
    Ok(PriceQuote::new(price, Engine::Bs, started, Diagnostics::new()))
}

/// Raw Black-Scholes formula; inputs are assumed valid with `sigma, tau > 0`.
pub fn bs_call(spot: f64, strike: f64, rate: f64, sigma: f64, tau: f64) -> f64 {
    let vol = sigma * tau.sqrt();
    let d1 = ((spot / strike).ln() + tau * (rate + 0.5 * sigma * sigma)) / vol;
    let d2 = d1 - vol;
    let price = spot * std_normal_cdf(d1) - strike * (-rate * tau).exp() * std_normal_cdf(d2);
    price.max(0.0)
}
