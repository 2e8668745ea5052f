//! Sweep configuration: a flat JSON document.

use std::path::Path;

use cev_core::{Engine, EngineConfig, ExponentMode, McConfig};
use serde::{Deserialize, Serialize};

use crate::error::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentArg {
    Consistent,
    Literal,
}

impl From<ExponentArg> for ExponentMode {
    fn from(a: ExponentArg) -> Self {
        match a {
            ExponentArg::Consistent => ExponentMode::TransformConsistent,
            ExponentArg::Literal => ExponentMode::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub sigmas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub maturities: Vec<f64>,
    #[serde(default = "default_spot")]
    pub spot: f64,
    #[serde(default = "default_strike")]
    pub strike: f64,
    #[serde(default = "default_rate")]
    pub rate: f64,
    #[serde(default = "default_engines")]
    pub engines: Vec<String>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_warmup")]
    pub warmup: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_paths: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent_mode: Option<ExponentArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<usize>,
}

fn default_spot() -> f64 {
    100.0
}
fn default_strike() -> f64 {
    110.0
}
fn default_rate() -> f64 {
    0.05
}
fn default_engines() -> Vec<String> {
    vec!["semiclassical".into(), "ncx2".into()]
}
fn default_repetitions() -> usize {
    30
}
fn default_warmup() -> usize {
    5
}

impl SweepConfig {
    /// Reference grid: T = 0.5, three volatilities, three elasticities.
    pub fn reference_grid() -> Self {
        Self::grid(vec![0.2, 0.5, 0.9], vec![1.0, 1.45, 1.9], vec![0.5])
    }

    pub fn grid(sigmas: Vec<f64>, alphas: Vec<f64>, maturities: Vec<f64>) -> Self {
        Self {
            sigmas,
            alphas,
            maturities,
            spot: default_spot(),
            strike: default_strike(),
            rate: default_rate(),
            engines: default_engines(),
            repetitions: default_repetitions(),
            warmup: default_warmup(),
            seed: None,
            mc_paths: None,
            mc_steps: None,
            jobs: None,
            exponent_mode: None,
            max_terms: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let cfg: SweepConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path.display().to_string(), e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.sigmas.is_empty() || self.alphas.is_empty() || self.maturities.is_empty() {
            return Err(BenchError::Config(
                "sigmas, alphas and maturities must be non-empty".into(),
            ));
        }
        if self.engines.is_empty() {
            return Err(BenchError::Config("engines must be non-empty".into()));
        }
        self.engine_list()?;
        if self.repetitions <= self.warmup {
            return Err(BenchError::Config("repetitions must exceed warmup".into()));
        }
        if self.jobs == Some(0) {
            return Err(BenchError::Config("jobs must be positive".into()));
        }
        Ok(())
    }

    /// Engines in configuration order, duplicates removed.
    pub fn engine_list(&self) -> Result<Vec<Engine>, BenchError> {
        let mut out = Vec::new();
        for name in &self.engines {
            let e: Engine = name.parse().map_err(BenchError::Config)?;
            if !out.contains(&e) {
                out.push(e);
            }
        }
        Ok(out)
    }

    pub fn engine_config(&self) -> EngineConfig {
        let mut cfg = EngineConfig::default();
        if let Some(mode) = self.exponent_mode {
            cfg.semiclassical.exponent_mode = mode.into();
        }
        if let Some(n) = self.max_terms {
            cfg.series.max_terms = n;
        }
        let defaults = McConfig::default();
        cfg.mc = McConfig {
            paths: self.mc_paths.unwrap_or(defaults.paths),
            steps: self.mc_steps.unwrap_or(defaults.steps),
            seed: self.seed.unwrap_or(defaults.seed),
            ..defaults
        };
        cfg
    }
}
