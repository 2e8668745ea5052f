//! Semiclassical path-integral pricing under CEV.
//!
//! The transition kernel in `y = S^(2 - alpha)` is approximated by
//! `exp(-A_class) sqrt(-M / 2 pi)`, where `A_class` is the action of the
//! closed-form classical path and `M` its van Vleck determinant; the call
//! price is one quadrature of that kernel against the payoff.

pub mod black_scholes;
pub mod hyperdual;
pub mod path;
pub mod pricing;
pub mod propagator;

pub use black_scholes::{price_call_bs_semiclassical, BsClassicalPath};
pub use path::{
    boundary_constants, classical_action, classical_path_value, inverse_transform, transform_spot, ClassicalPath,
    TimeConvention, TransformedModel,
};
pub use pricing::price_call_semiclassical;
pub use propagator::{
    propagator, van_vleck, ExponentMode, KernelStatus, PropagatorValue, SemiclassicalConfig, VanVleckMode,
    NORMALIZATION,
};
