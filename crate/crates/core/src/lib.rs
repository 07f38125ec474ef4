//! Pseudo-hermitian random matrices `phi = A B`, with `A` from the GUE and
//! an indefinite diagonal metric `B = diag(1, …, 1, t, …, t)`.
//!
//! - [`linalg`]: sampling, the product `phi` and its complex spectrum.
//! - [`analytic`]: large-N real density, support, complex boundary and phases.
//! - [`ensemble`]: reproducible Monte Carlo runs and their comparison with [`analytic`].
//! - [`mech`]: the positive-metric control `M^{-1} K`.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`);
//! Monte Carlo runs use `f64`.

pub mod analytic;
pub mod ensemble;
pub mod linalg;
pub mod mech;
pub mod scalar;

pub type Matrix64 = linalg::ComplexMatrix<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Hermitian64 = linalg::HermitianMatrix<f64>;
pub type Hermitian32 = linalg::HermitianMatrix<f32>;
pub type Spectrum64 = linalg::Spectrum<f64>;
pub type Spectrum32 = linalg::Spectrum<f32>;
pub type BoundaryCurve64 = analytic::BoundaryCurve<f64>;
pub type RealAxisSheet64 = analytic::RealAxisSheet<f64>;
