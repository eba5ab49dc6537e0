//! Periodic-box spectral representation, operators and norms.

pub mod besov;
pub mod field;
pub mod grid;
pub mod nonlinear;
pub mod norms;
pub mod ops;
pub mod snapshot;

pub use besov::{besov_b0infinf, besov_kernel_bound, block_sup_norms, BESOV_PARTITION_BOUND};
pub use field::{SpectralField, SOLENOIDAL_TOLERANCE};
pub use grid::Grid;
pub use nonlinear::{nonlinearity, nonlinearity_checked, Nonlinearity, ALIASING_GUARD};
pub use norms::{
    edge_fraction, gradient_sobolev_lebesgue_norm, gradient_sobolev_norm, lebesgue_norm, sobolev_lebesgue_norm, sobolev_norm, sup_norm,
    Exponent,
};
pub use ops::{
    derivative, divergence, gradient, inner_product, inverse_neg_laplacian, laplacian, leray_project, perp_gradient, rot2d,
    transform_roundtrip, MultiIndex,
};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};
