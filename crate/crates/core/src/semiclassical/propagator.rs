//! Van Vleck determinant and the Pauli-form propagator.

use std::f64::consts::PI;

use crate::error::PathError;
use crate::quadrature::QuadratureSpec;

use super::hyperdual::HyperDual;
use super::path::{action_from_endpoints, ClassicalPath, TransformedModel};

/// Which payoff exponent and lower limit the pricing integral uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    /// Payoff `yT^(1/beta) - E` above `E^beta`, the inverse of `y = S^beta`.
    #[default]
    TransformConsistent,
    /// Payoff `yT^beta - E` above `E^(1/beta)`, as printed in the source formula.
    PaperLiteral,
}

impl ExponentMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExponentMode::TransformConsistent => "transform_consistent",
            ExponentMode::PaperLiteral => "paper_literal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VanVleckMode {
    /// Exact mixed partial of the closed-form action (hyper-dual arithmetic).
    #[default]
    Analytic,
    /// Central mixed difference of the closed-form action.
    FiniteDifference,
}

impl VanVleckMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            VanVleckMode::Analytic => "analytic",
            VanVleckMode::FiniteDifference => "finite_difference",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalConfig {
    pub quad: QuadratureSpec,
    pub exponent_mode: ExponentMode,
    pub vanvleck_mode: VanVleckMode,
    /// Relative step of the mixed finite difference, in `(0, 1e-2)`.
    pub fd_step: f64,
    /// Apply `exp(-r tau)` to the payoff, as in the Black-Scholes contract function.
    pub discount: bool,
}

impl Default for SemiclassicalConfig {
    fn default() -> Self {
        Self {
            quad: QuadratureSpec::default(),
            exponent_mode: ExponentMode::default(),
            vanvleck_mode: VanVleckMode::default(),
            fd_step: 1e-5,
            discount: true,
        }
    }
}

/// Normalization used under the square root: the mixed partial of the
/// action is negative on this model, so the prefactor is `sqrt(-M / 2 pi)`.
pub const NORMALIZATION: &str = "sqrt(-M/2pi)";

/// Why a kernel evaluation contributes nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelStatus {
    Valid,
    BranchInvalid,
    NonPositiveDeterminant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorValue {
    pub action: f64,
    /// Raw mixed partial `d^2 A / dy0 dyT`.
    pub van_vleck: f64,
    /// `exp(-A) sqrt(-M / 2 pi)`, or zero when `status` is not valid.
    pub kernel: f64,
    pub status: KernelStatus,
}

impl PropagatorValue {
    fn zero(status: KernelStatus, action: f64, van_vleck: f64) -> Self {
        Self {
            action,
            van_vleck,
            kernel: 0.0,
            status,
        }
    }

    /// `ln kernel`, finite only for valid evaluations.
    pub fn log_kernel(&self) -> f64 {
        if self.status == KernelStatus::Valid {
            -self.action + 0.5 * (-self.van_vleck / (2.0 * PI)).ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Action and exact mixed partial in one hyper-dual evaluation.
pub(crate) fn action_and_mixed_partial(model: &TransformedModel, y0: f64, y_t: f64) -> Result<(f64, f64), PathError> {
    let a = action_from_endpoints(
        model,
        HyperDual::new(y0, 1.0, 0.0, 0.0),
        HyperDual::new(y_t, 0.0, 1.0, 0.0),
    )?;
    Ok((a.re, a.e12))
}

pub(crate) fn mixed_difference(model: &TransformedModel, y0: f64, y_t: f64, fd_step: f64) -> Result<f64, PathError> {
    let h0 = fd_step * y0;
    let h1 = fd_step * y_t;
    if !(h0 > 0.0 && h1 > 0.0) {
        return Err(PathError::NonFinite);
    }
    let corner = |dy0: f64, dyt: f64| -> Result<f64, PathError> {
        action_from_endpoints(model, y0 + dy0, y_t + dyt).map_err(|_| PathError::NonFinite)
    };
    let m = (corner(h0, h1)? - corner(h0, -h1)? - corner(-h0, h1)? + corner(-h0, -h1)?) / (4.0 * h0 * h1);
    if m.is_finite() {
        Ok(m)
    } else {
        Err(PathError::NonFinite)
    }
}

/// Van Vleck determinant `M = d^2 A_class / dy0 dyT` of the path.
pub fn van_vleck(path: &ClassicalPath, cfg: &SemiclassicalConfig) -> Result<f64, PathError> {
    let m = match cfg.vanvleck_mode {
        VanVleckMode::Analytic => {
            action_and_mixed_partial(&path.model, path.y0, path.y_t)
                .map_err(|_| PathError::NonFinite)?
                .1
        }
        VanVleckMode::FiniteDifference => mixed_difference(&path.model, path.y0, path.y_t, cfg.fd_step)?,
    };
    if m.is_finite() {
        Ok(m)
    } else {
        Err(PathError::NonFinite)
    }
}

/// Kernel for the transition `y0 -> yT` without constructing a path object.
pub(crate) fn kernel_at(model: &TransformedModel, y0: f64, y_t: f64, cfg: &SemiclassicalConfig) -> PropagatorValue {
    let evaluated = match cfg.vanvleck_mode {
        VanVleckMode::Analytic => action_and_mixed_partial(model, y0, y_t),
        VanVleckMode::FiniteDifference => action_from_endpoints(model, y0, y_t)
            .and_then(|a| mixed_difference(model, y0, y_t, cfg.fd_step).map(|m| (a, m))),
    };
    match evaluated {
        Err(_) => PropagatorValue::zero(KernelStatus::BranchInvalid, f64::NAN, f64::NAN),
        Ok((action, m)) => {
            if !action.is_finite() || !m.is_finite() {
                PropagatorValue::zero(KernelStatus::BranchInvalid, action, m)
            } else if -m <= 0.0 {
                PropagatorValue::zero(KernelStatus::NonPositiveDeterminant, action, m)
            } else {
                let kernel = (-action).exp() * (-m / (2.0 * PI)).sqrt();
                PropagatorValue {
                    action,
                    van_vleck: m,
                    kernel,
                    status: KernelStatus::Valid,
                }
            }
        }
    }
}

/// Semiclassical propagator `K = exp(-A) sqrt(-M / 2 pi)` along the path.
pub fn propagator(path: &ClassicalPath, cfg: &SemiclassicalConfig) -> PropagatorValue {
    kernel_at(&path.model, path.y0, path.y_t, cfg)
}
