//! Pseudo-spectral laboratory for the relaxed (hyperbolic) Navier-Stokes
//! system `tau u_tt - mu Lap u + u_t + grad(p + tau p_t) = -(u.grad)u - tau (u_t.grad)u - tau (u.grad)u_t`
//! on a large periodic box, together with the classical Navier-Stokes
//! equation and the damped wave equation it relaxes to.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

// `!(x > 0.0)` is the NaN-rejecting form used throughout for parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod hns;
pub mod ns;
pub mod propagators;
pub mod rates;
pub mod scalar;
pub mod schedule;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;
pub use spectral::MultiIndex;

pub type Grid = spectral::Grid<f64>;
pub type Field = spectral::SpectralField<f64>;
pub type Grid32 = spectral::Grid<f32>;
pub type Field32 = spectral::SpectralField<f32>;
