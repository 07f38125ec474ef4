//! Large-N predictions for `phi = A B` with `B = diag(1, …, 1, t, …, t)`.
//!
//! The holomorphic gap equation reduces to a cubic in `v = m b` with
//! `u = m w`,
//!
//! ```text
//! v^3 + v^2 u (1 + 1/t) + v (u^2/t + 1) + u (1 - λ + λ/t) = 0,
//! ```
//!
//! and the resolvent is `G(w) = λ/(w + b) + (1 - λ)/(w + t b)`. The real
//! density follows from the jump of `G` across the real axis
//! ([`RealAxisSheet`]); at `t = -1` closed forms exist for the density, the
//! support and the boundary of the complex domain ([`closed_form`]).

pub mod closed_form;
mod cubic;
mod green;
mod phase;
mod quad;
mod real_axis;

use thiserror::Error;

pub use closed_form::{
    boundary_t_minus1, distance_to_axis, domain_area, domain_area_by_quadrature, fraction_real, rho_complex_uniform,
    rho_real_closed_form, support_endpoint_a, BoundaryCurve,
};
pub use cubic::{real_roots_up_to_cubic, solve_cubic, CubicCoefficients};
pub use green::{gap_cubic, green_branch, green_from_v, BranchTag, GreenBranch};
pub use phase::{critical_curves, phase_classify, CriticalCurves, PhaseClass, PhaseLabel};
pub use quad::{integrate, Quadrature};
pub use real_axis::{
    complex_branch_points, discriminant_in_s, fraction_real_general, rho_real_general, support_intervals,
    RealAxisSheet, RealDensityCurve, SupportIntervals,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("leading cubic coefficient vanishes")]
    DegenerateCubic,
    #[error("non-finite input")]
    NonFinite,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("branch collision while continuing to w = {re} + {im}i")]
    BranchCollision { re: f64, im: f64 },
    #[error("adaptive quadrature did not reach tolerance (estimate {estimate}, error {error})")]
    Quadrature { estimate: f64, error: f64 },
}

pub(crate) fn check_params<T: crate::scalar::Real>(lambda: T, t: T, m: T) -> Result<(), AnalyticError> {
    let (lambda, t, m) = (lambda.to_f64_lossy(), t.to_f64_lossy(), m.to_f64_lossy());
    if !(0.0..=1.0).contains(&lambda) {
        return Err(AnalyticError::InvalidParameter(format!("lambda = {lambda} outside [0, 1]")));
    }
    if !t.is_finite() || t == 0.0 {
        return Err(AnalyticError::InvalidParameter(format!("t = {t} must be finite and nonzero")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(AnalyticError::InvalidParameter(format!("m = {m} must be positive")));
    }
    Ok(())
}
