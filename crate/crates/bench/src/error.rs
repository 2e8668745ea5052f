use cev_core::PricingError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("config parse error: {0}")]
    ConfigParse(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("MissingColumn: {0}")]
    MissingColumn(String),
    #[error("{}: {}", .0.name(), .0)]
    Pricing(#[from] PricingError),
    #[error("all {cells} cells failed; first error: {first}")]
    AllCellsFailed { cells: usize, first: String, code: i32 },
}

impl BenchError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 domain, 3 numerical non-convergence, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Pricing(e) => pricing_exit_code(e),
            BenchError::AllCellsFailed { code, .. } => *code,
            BenchError::Io { .. } | BenchError::ConfigParse(_) | BenchError::Csv(_) | BenchError::MissingColumn(_) => 4,
        }
    }
}

pub fn pricing_exit_code(e: &PricingError) -> i32 {
    if e.is_domain() {
        2
    } else {
        3
    }
}
