//! Transformed CEV model, the closed-form classical path and its action.
//!
//! In `y = S^beta` coordinates the Lagrangian is
//! `{y' + beta r (gamma - y)}^2 / (2 beta^2 sigma^2 y) + beta r`, and every
//! extremal has the form `y(t) = [(C1 + 2 C2 u)^2 - gamma^2] / (4 C2 u)` with
//! `u = exp(+-r beta t)`.

use crate::error::{PathError, PricingError};
use crate::market::{MarketScenario, BETA_MIN};

use super::hyperdual::Scalar;

/// Below this `|exp(r tau beta) - 1|` the boundary constants are singular.
pub const SINGULAR_GROWTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedModel {
    /// `beta = 2 - alpha`.
    pub beta: f64,
    /// `gamma = (3 - alpha) sigma^2 / (2 r)`.
    pub gamma: f64,
    pub sigma: f64,
    pub rate: f64,
    pub tau: f64,
}

impl TransformedModel {
    pub fn new(scenario: &MarketScenario, tau: f64) -> Result<Self, PricingError> {
        let beta = 2.0 - scenario.alpha;
        if !(BETA_MIN..=2.0).contains(&beta) {
            return Err(PricingError::domain("alpha", "0 <= alpha <= 2 - beta_min"));
        }
        if !(scenario.rate > 0.0) {
            return Err(PricingError::domain("rate", "rate > 0"));
        }
        if !(scenario.sigma > 0.0) {
            return Err(PricingError::domain("sigma", "sigma > 0"));
        }
        if !(tau > 0.0) {
            return Err(PricingError::domain("tau", "tau > 0"));
        }
        Ok(Self::from_parts(beta, scenario.sigma, scenario.rate, tau))
    }

    pub fn from_parts(beta: f64, sigma: f64, rate: f64, tau: f64) -> Self {
        let alpha = 2.0 - beta;
        Self {
            beta,
            gamma: (3.0 - alpha) * sigma * sigma / (2.0 * rate),
            sigma,
            rate,
            tau,
        }
    }

    /// `exp(r tau beta) - 1`, computed without cancellation.
    pub fn growth_minus_one(&self) -> f64 {
        (self.rate * self.tau * self.beta).exp_m1()
    }

    pub fn growth(&self) -> f64 {
        1.0 + self.growth_minus_one()
    }

    pub fn is_singular(&self) -> bool {
        self.growth_minus_one().abs() < SINGULAR_GROWTH
    }
}

/// `y = S^beta`.
pub fn transform_spot(spot: f64, beta: f64) -> f64 {
    spot.powf(beta)
}

/// `S = y^(1/beta)`.
pub fn inverse_transform(y: f64, beta: f64) -> f64 {
    y.powf(1.0 / beta)
}

/// Boundary constants `(C1, C2)` in a cancellation-free rearrangement of
/// the printed radical forms. The square root is taken with the same branch:
/// `C2 = [yT e + y0 - sqrt(D)] / (e - 1)^2`, `D = gamma^2 (e - 1)^2 + 4 y0 yT e`.
pub(crate) fn boundary_constants_generic<T: Scalar>(model: &TransformedModel, y0: T, y_t: T) -> (T, T) {
    let em1 = model.growth_minus_one();
    let e = T::cst(1.0 + em1);
    let em1_t = T::cst(em1);
    let g = T::cst(model.gamma);
    let four = T::cst(4.0);
    let two = T::cst(2.0);
    let root = (g * g * em1_t * em1_t + four * y0 * y_t * e).sqrt();
    let em1_sq = em1_t * em1_t;
    // (yT e + y0)^2 - D = (yT e - y0)^2 - gamma^2 (e - 1)^2
    let d = y_t * e - y0;
    let c2 = (d - g * em1_t) * (d + g * em1_t) / (em1_sq * (y_t * e + y0 + root));
    // (e + 1)^2 D - 4 e^2 (y0 + yT)^2 = (e + 1)^2 gamma^2 (e - 1)^2 + 4 e (e y0 - yT)(e yT - y0)
    let ep1 = e + T::cst(1.0);
    let num = ep1 * ep1 * g * g * em1_sq + four * e * (e * y0 - y_t) * d;
    let c1 = num / (em1_sq * (ep1 * root + two * e * (y0 + y_t)));
    (c1, c2)
}

/// Boundary constants for the path joining `y0` and `yT` over `tau`.
pub fn boundary_constants(model: &TransformedModel, y0: f64, y_t: f64) -> Result<(f64, f64), PathError> {
    let em1 = model.growth_minus_one();
    if em1.abs() < SINGULAR_GROWTH {
        return Err(PathError::SingularBoundary { growth_minus_one: em1 });
    }
    Ok(boundary_constants_generic(model, y0, y_t))
}

/// Closed-form action from the constants, generic over the scalar type.
///
/// Returns the action and the argument of its logarithm; the latter must be
/// positive for the action to be real.
pub(crate) fn action_from_constants<T: Scalar>(model: &TransformedModel, c1: T, c2: T) -> (T, f64) {
    let em1 = model.growth_minus_one();
    let e = T::cst(1.0 + em1);
    let g = T::cst(model.gamma);
    let (beta, r, sigma, tau) = (model.beta, model.rate, model.sigma, model.tau);
    let three_minus_alpha = 1.0 + beta;
    let two = T::cst(2.0);
    let w0 = c1 + two * c2;
    // (gamma - w_tau)/(gamma - w_0) = 1 + t with t = -2 C2 (e - 1)/(gamma - w_0)
    let t = -(two * c2 * T::cst(em1)) / (g - w0);
    let log_argument = 1.0 + t.re();
    // 2 gamma r^2 / sigma^2 = (3 - alpha) r and 2 gamma r / (beta sigma^2) = (3 - alpha) / beta
    let linear = T::cst(beta * r * tau - three_minus_alpha * r * tau);
    let log_term = T::cst(three_minus_alpha / beta) * t.ln_1p();
    let tail = T::cst(r / (sigma * sigma)) * (g * g - c1 * c1) * T::cst(-em1) / (T::cst(2.0 * beta) * c2 * e);
    (linear + log_term + tail, log_argument)
}

/// Action as a function of the endpoints, generic over the scalar type.
pub(crate) fn action_from_endpoints<T: Scalar>(model: &TransformedModel, y0: T, y_t: T) -> Result<T, PathError> {
    let (c1, c2) = boundary_constants_generic(model, y0, y_t);
    let (a, log_argument) = action_from_constants(model, c1, c2);
    if !(log_argument > 0.0) {
        return Err(PathError::BranchError { log_argument });
    }
    if !a.re().is_finite() {
        return Err(PathError::DegeneratePath { c2: c2.re() });
    }
    Ok(a)
}

/// Sign of the exponent in `u = exp(s r beta t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeConvention {
    /// `u = exp(+r beta t)`.
    Forward,
    /// `u = exp(-r beta t)`.
    Backward,
}

impl TimeConvention {
    fn sign(self) -> f64 {
        match self {
            TimeConvention::Forward => 1.0,
            TimeConvention::Backward => -1.0,
        }
    }
}

/// The extremal trajectory between two transformed endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPath {
    pub model: TransformedModel,
    pub y0: f64,
    pub y_t: f64,
    pub c1: f64,
    pub c2: f64,
    /// Exponent sign that reproduces the endpoints for these constants.
    pub convention: TimeConvention,
    /// True when `y(0) = y0` and `y(tau) = yT`; false for the reverse.
    pub starts_at_spot: bool,
}

fn raw_path_value(model: &TransformedModel, c1: f64, c2: f64, sign: f64, t: f64) -> f64 {
    let u = (sign * model.rate * model.beta * t).exp();
    let w = c1 + 2.0 * c2 * u;
    (w - model.gamma) * (w + model.gamma) / (4.0 * c2 * u)
}

fn rel_gap(value: f64, target: f64) -> f64 {
    (value - target).abs() / target.abs().max(1.0)
}

impl ClassicalPath {
    /// Computes the constants and selects the time convention whose path
    /// passes through both endpoints.
    pub fn new(model: TransformedModel, y0: f64, y_t: f64) -> Result<Self, PathError> {
        let (c1, c2) = boundary_constants(&model, y0, y_t)?;
        if c2.abs() < 1e-300 {
            return Err(PathError::DegeneratePath { c2 });
        }
        let mut best: Option<(f64, TimeConvention, bool)> = None;
        for convention in [TimeConvention::Forward, TimeConvention::Backward] {
            let start = raw_path_value(&model, c1, c2, convention.sign(), 0.0);
            let end = raw_path_value(&model, c1, c2, convention.sign(), model.tau);
            for (starts_at_spot, a, b) in [(true, y0, y_t), (false, y_t, y0)] {
                let gap = rel_gap(start, a).max(rel_gap(end, b));
                if gap.is_finite() && best.is_none_or(|(g, _, _)| gap < g) {
                    best = Some((gap, convention, starts_at_spot));
                }
            }
        }
        match best {
            Some((gap, convention, starts_at_spot)) if gap < 1e-6 => Ok(Self {
                model,
                y0,
                y_t,
                c1,
                c2,
                convention,
                starts_at_spot,
            }),
            _ => Err(PathError::EndpointMismatch),
        }
    }

    fn u(&self, t: f64) -> f64 {
        (self.convention.sign() * self.model.rate * self.model.beta * t).exp()
    }

    // y = a / u + C1 + C2 u with a = (C1^2 - gamma^2) / (4 C2).
    fn a_coefficient(&self) -> f64 {
        let g = self.model.gamma;
        (self.c1 - g) * (self.c1 + g) / (4.0 * self.c2)
    }

    /// First time derivative of the path.
    pub fn velocity(&self, t: f64) -> f64 {
        let u = self.u(t);
        let k = self.convention.sign() * self.model.rate * self.model.beta;
        k * (self.c2 * u - self.a_coefficient() / u)
    }

    /// Second time derivative of the path.
    pub fn acceleration(&self, t: f64) -> f64 {
        let u = self.u(t);
        let k = self.model.rate * self.model.beta;
        k * k * (self.c2 * u + self.a_coefficient() / u)
    }

    /// Lagrangian evaluated along the path.
    pub fn lagrangian(&self, t: f64) -> f64 {
        let m = &self.model;
        let y = classical_path_value(self, t).unwrap_or(f64::NAN);
        let flow = self.velocity(t) + m.beta * m.rate * (m.gamma - y);
        flow * flow / (2.0 * m.beta * m.beta * m.sigma * m.sigma * y) + m.beta * m.rate
    }
}

/// `y_class(t) = [(C1 + 2 C2 u)^2 - gamma^2] / (4 C2 u)`.
pub fn classical_path_value(path: &ClassicalPath, t: f64) -> Result<f64, PathError> {
    if path.c2.abs() < 1e-300 {
        return Err(PathError::DegeneratePath { c2: path.c2 });
    }
    Ok(raw_path_value(&path.model, path.c1, path.c2, path.convention.sign(), t))
}

/// Closed-form action of the path, equal to the time integral of the
/// Lagrangian along it.
pub fn classical_action(path: &ClassicalPath) -> Result<f64, PathError> {
    let (a, log_argument) = action_from_constants(&path.model, path.c1, path.c2);
    if !(log_argument > 0.0) {
        return Err(PathError::BranchError { log_argument });
    }
    Ok(a)
}
