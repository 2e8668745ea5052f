//! Monte Carlo oracle: full-truncation Euler for `dS = r S dt + sigma S^(alpha/2) dW`
//! with absorption at zero.
//!
//! Paths are grouped in fixed-size batches. Batch `i` draws from the ChaCha8
//! stream `(seed, i)`, and batch sums are reduced pairwise in batch order, so
//! the quote does not depend on how many threads ran the batches.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::PricingError;
use crate::market::{
    deterministic_value, elapsed_ns, intrinsic_value, validate_request, Diagnostics, Engine, PriceQuote, PricingRequest,
};

const BATCH_PATHS: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum McScheme {
    #[default]
    EulerFullTruncation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub paths: usize,
    /// Time steps per year; a request uses `ceil(steps * tau)` steps.
    pub steps: usize,
    pub seed: u64,
    pub scheme: McScheme,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            paths: 2_000_000,
            steps: 512,
            seed: 20_240_601,
            scheme: McScheme::EulerFullTruncation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McQuote {
    pub price: f64,
    pub std_error: f64,
    pub absorbed_fraction: f64,
    pub wall_time: u64,
}

impl McQuote {
    pub fn to_price_quote(&self) -> PriceQuote {
        PriceQuote {
            price: self.price,
            engine: Engine::Mc,
            wall_time: self.wall_time,
            diagnostics: Diagnostics::new()
                .with("std_error", format!("{:.6e}", self.std_error))
                .with("absorbed_fraction", format!("{:.6e}", self.absorbed_fraction)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct BatchSums {
    sum: f64,
    sum_sq: f64,
    absorbed: u64,
}

impl BatchSums {
    fn merge(self, o: Self) -> Self {
        Self {
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            absorbed: self.absorbed + o.absorbed,
        }
    }
}

fn pairwise(parts: &[BatchSums]) -> BatchSums {
    match parts.len() {
        0 => BatchSums::default(),
        1 => parts[0],
        n => pairwise(&parts[..n / 2]).merge(pairwise(&parts[n / 2..])),
    }
}

struct Stepper {
    spot: f64,
    strike: f64,
    drift: f64,
    vol: f64,
    half_alpha: f64,
    steps: usize,
}

impl Stepper {
    fn run_batch(&self, seed: u64, batch: u64, paths: usize) -> BatchSums {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch);
        let mut out = BatchSums::default();
        for _ in 0..paths {
            let mut s = self.spot;
            let mut absorbed = false;
            for _ in 0..self.steps {
                let z: f64 = rng.sample(StandardNormal);
                let diffusion = if self.half_alpha == 1.0 {
                    s
                } else {
                    s.max(0.0).powf(self.half_alpha)
                };
                s += self.drift * s + self.vol * diffusion * z;
                if s <= 0.0 {
                    absorbed = true;
                    break;
                }
            }
            let payoff = if absorbed { 0.0 } else { (s - self.strike).max(0.0) };
            out.sum += payoff;
            out.sum_sq += payoff * payoff;
            out.absorbed += u64::from(absorbed);
        }
        out
    }
}

/// Monte Carlo price, standard error and absorbed fraction.
pub fn price_call_mc(req: &PricingRequest, cfg: &McConfig) -> Result<McQuote, PricingError> {
    let started = Instant::now();
    let req = validate_request(*req, Engine::Mc)?;
    if cfg.paths < 1000 {
        return Err(PricingError::domain("paths", "paths >= 1000"));
    }
    if cfg.steps < 16 {
        return Err(PricingError::domain("steps", "steps >= 16"));
    }
    if req.tau == 0.0 || req.sigma() == 0.0 {
        let price = if req.tau == 0.0 {
            intrinsic_value(&req)
        } else {
            deterministic_value(&req)
        };
        return Ok(McQuote {
            price,
            std_error: 0.0,
            absorbed_fraction: 0.0,
            wall_time: elapsed_ns(started),
        });
    }
    let steps = ((cfg.steps as f64) * req.tau).ceil().max(1.0) as usize;
    let dt = req.tau / steps as f64;
    let stepper = Stepper {
        spot: req.spot(),
        strike: req.strike(),
        drift: req.rate() * dt,
        vol: req.sigma() * dt.sqrt(),
        half_alpha: 0.5 * req.alpha(),
        steps,
    };
    let batches = cfg.paths.div_ceil(BATCH_PATHS);
    let parts: Vec<BatchSums> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let n = BATCH_PATHS.min(cfg.paths - b * BATCH_PATHS);
            stepper.run_batch(cfg.seed, b as u64, n)
        })
        .collect();
    let total = pairwise(&parts);
    let n = cfg.paths as f64;
    let mean = total.sum / n;
    let var = ((total.sum_sq - total.sum * mean) / (n - 1.0)).max(0.0);
    let discount = (-req.rate() * req.tau).exp();
    Ok(McQuote {
        price: discount * mean,
        std_error: discount * (var / n).sqrt(),
        absorbed_fraction: total.absorbed as f64 / n,
        wall_time: elapsed_ns(started),
    })
}
