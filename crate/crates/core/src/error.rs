//! Error types shared by every engine.

use thiserror::Error;

use crate::quadrature::IntegrationResult;

/// Failures of the adaptive integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteEvaluation { x: f64 },
    #[error("no convergence after exhausting subdivisions (error estimate {error_estimate:e})")]
    NonConvergence {
        error_estimate: f64,
        partial: IntegrationResult,
    },
}

/// Failures of the special-function layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("domain error: {field} must satisfy {constraint}")]
    Domain {
        field: &'static str,
        constraint: &'static str,
    },
    #[error("series did not converge within {terms} terms (tail bound {tail_bound:e})")]
    SeriesNonConvergence { terms: usize, tail_bound: f64 },
}

/// Failures while building or evaluating a classical path.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("singular boundary: exp(r*tau*beta) - 1 = {growth_minus_one:e}")]
    SingularBoundary { growth_minus_one: f64 },
    #[error("degenerate path: C2 = {c2:e}")]
    DegeneratePath { c2: f64 },
    #[error("action log argument {log_argument:e} is not positive")]
    BranchError { log_argument: f64 },
    #[error("non-finite van Vleck determinant")]
    NonFinite,
    #[error("endpoints are not reproduced by either time convention")]
    EndpointMismatch,
}

/// Top-level pricing error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    #[error("domain error: {field} must satisfy {constraint}")]
    Domain {
        field: &'static str,
        constraint: &'static str,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Specfun(SpecfunError),
    #[error(transparent)]
    Path(#[from] PathError),
}

impl From<SpecfunError> for PricingError {
    fn from(err: SpecfunError) -> Self {
        match err {
            SpecfunError::Domain { field, constraint } => PricingError::Domain { field, constraint },
            other => PricingError::Specfun(other),
        }
    }
}

impl PricingError {
    pub fn domain(field: &'static str, constraint: &'static str) -> Self {
        PricingError::Domain { field, constraint }
    }

    /// True for input-validation failures, false for numerical ones.
    pub fn is_domain(&self) -> bool {
        matches!(self, PricingError::Domain { .. })
    }

    /// Short machine-readable name, used on the CLI diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            PricingError::Domain { .. } => "DomainError",
            PricingError::Quadrature(QuadratureError::NonConvergence { .. }) => "NonConvergence",
            PricingError::Quadrature(QuadratureError::NonFiniteEvaluation { .. }) => "NonFiniteEvaluation",
            PricingError::Quadrature(QuadratureError::InvalidInterval { .. }) => "InvalidInterval",
            PricingError::Specfun(SpecfunError::SeriesNonConvergence { .. }) => "SeriesNonConvergence",
            PricingError::Specfun(SpecfunError::Domain { .. }) => "DomainError",
            PricingError::Path(PathError::SingularBoundary { .. }) => "SingularBoundary",
            PricingError::Path(PathError::DegeneratePath { .. }) => "DegeneratePath",
            PricingError::Path(PathError::BranchError { .. }) => "BranchError",
            PricingError::Path(PathError::NonFinite) => "NonFinite",
            PricingError::Path(PathError::EndpointMismatch) => "EndpointMismatch",
        }
    }
}
