//! Parameter sweeps: every (sigma, alpha, T) cell priced by every configured engine.

use std::fmt;

use cev_core::{price, Diagnostics, Engine, EngineConfig, PricingRequest};
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::error::{pricing_exit_code, BenchError};
use crate::timing::{measure, TimingStats};

/// Relative errors are only reported against benchmark prices above this.
pub const REL_ERR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EngineFailure {
    pub name: &'static str,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineOutcome {
    pub engine: Engine,
    pub price: Option<f64>,
    pub timing: Option<TimingStats>,
    pub diagnostics: Diagnostics,
    pub failure: Option<EngineFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub sigma: f64,
    pub alpha: f64,
    pub maturity: f64,
    pub outcomes: Vec<EngineOutcome>,
}

impl BenchmarkRecord {
    pub fn outcome(&self, engine: Engine) -> Option<&EngineOutcome> {
        self.outcomes.iter().find(|o| o.engine == engine)
    }

    pub fn price(&self, engine: Engine) -> Option<f64> {
        self.outcome(engine).and_then(|o| o.price)
    }

    pub fn median_ns(&self, engine: Engine) -> Option<u64> {
        self.outcome(engine).and_then(|o| o.timing).map(|t| t.median)
    }

    /// `|price(engine) - price(ncx2)|`.
    pub fn abs_err(&self, engine: Engine) -> Option<f64> {
        Some((self.price(engine)? - self.price(Engine::Ncx2)?).abs())
    }

    /// `abs_err / price(ncx2)`, undefined when the benchmark is below `REL_ERR_FLOOR`.
    pub fn rel_err(&self, engine: Engine) -> Option<f64> {
        let bench = self.price(Engine::Ncx2)?;
        if bench > REL_ERR_FLOOR {
            Some(self.abs_err(engine)? / bench)
        } else {
            None
        }
    }

    /// Median ncx2 time over median semiclassical time.
    pub fn time_ratio(&self) -> Option<f64> {
        let n = self.median_ns(Engine::Ncx2)? as f64;
        let s = self.median_ns(Engine::Semiclassical)? as f64;
        (s > 0.0).then(|| n / s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub records: Vec<BenchmarkRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    /// `(T, max semiclassical rel_err over the cells with that T)`.
    pub max_rel_err: Vec<(f64, Option<f64>)>,
    /// `(sigma, alpha, T, ncx2 / semiclassical median time)`.
    pub time_ratios: Vec<(f64, f64, f64, Option<f64>)>,
}

impl SweepReport {
    pub fn summary(&self) -> Summary {
        let mut maturities: Vec<f64> = Vec::new();
        for r in &self.records {
            if !maturities.contains(&r.maturity) {
                maturities.push(r.maturity);
            }
        }
        let max_rel_err = maturities
            .iter()
            .map(|&t| {
                let worst = self
                    .records
                    .iter()
                    .filter(|r| r.maturity == t)
                    .filter_map(|r| r.rel_err(Engine::Semiclassical))
                    .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))));
                (t, worst)
            })
            .collect();
        let time_ratios = self
            .records
            .iter()
            .map(|r| (r.sigma, r.alpha, r.maturity, r.time_ratio()))
            .collect();
        Summary {
            max_rel_err,
            time_ratios,
        }
    }
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.digits$}"))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "max rel_err (semiclassical vs ncx2) per maturity:")?;
        for (t, e) in &self.max_rel_err {
            writeln!(f, "  T={t}: {}", opt(*e, 6))?;
        }
        writeln!(f, "time ratio ncx2/semiclassical per cell:")?;
        for (s, a, t, ratio) in &self.time_ratios {
            writeln!(f, "  sigma={s} alpha={a} T={t}: {}", opt(*ratio, 2))?;
        }
        Ok(())
    }
}

fn run_engine(req: &PricingRequest, engine: Engine, cfg: &EngineConfig, reps: usize, warmup: usize) -> EngineOutcome {
    match measure(reps, warmup, || {
        price(req, engine, cfg).map(|q| {
            let ns = q.wall_time;
            (q, ns)
        })
    }) {
        Ok((q, timing)) => EngineOutcome {
            engine,
            price: Some(q.price),
            timing: Some(timing),
            diagnostics: q.diagnostics,
            failure: None,
        },
        Err(e) => EngineOutcome {
            engine,
            price: None,
            timing: None,
            diagnostics: Diagnostics::new(),
            failure: Some(EngineFailure {
                name: e.name(),
                message: e.to_string(),
                exit_code: pricing_exit_code(&e),
            }),
        },
    }
}

/// Prices every cell in sigma-major, then alpha, then T order. Cells run
/// in a worker pool of `jobs` threads; each cell is timed on one worker.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport, BenchError> {
    cfg.validate()?;
    let engines = cfg.engine_list()?;
    let engine_cfg = cfg.engine_config();
    let mut cells = Vec::new();
    for &sigma in &cfg.sigmas {
        for &alpha in &cfg.alphas {
            for &maturity in &cfg.maturities {
                cells.push((sigma, alpha, maturity));
            }
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cfg.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| BenchError::Config(e.to_string()))?;
    let records: Vec<BenchmarkRecord> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(sigma, alpha, maturity)| {
                let req = PricingRequest::call(cfg.spot, cfg.strike, cfg.rate, sigma, alpha, maturity);
                let outcomes = engines
                    .iter()
                    .map(|&e| run_engine(&req, e, &engine_cfg, cfg.repetitions, cfg.warmup))
                    .collect();
                BenchmarkRecord {
                    sigma,
                    alpha,
                    maturity,
                    outcomes,
                }
            })
            .collect()
    });
    let all_failed = records.iter().all(|r| r.outcomes.iter().all(|o| o.failure.is_some()));
    if all_failed {
        let first = records[0].outcomes[0].failure.clone().expect("failed outcome");
        return Err(BenchError::AllCellsFailed {
            cells: records.len(),
            first: format!("{}: {}", first.name, first.message),
            code: first.exit_code,
        });
    }
    Ok(SweepReport { records })
}
