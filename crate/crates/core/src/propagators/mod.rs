//! Exact linear solution operators and the whole-plane quadrature oracle.

pub mod damped;
pub mod oracle;
pub mod quadrature;

pub use damped::{dw_evolve, dw_propagate, heat_propagate, DampedWaveParams, ModeCoefficients, ModePropagator, Regime};
pub use oracle::{dw_wholespace_norm_oracle, oracle_extent, OracleNorm, OracleValue, RadialProfile};
