//! Leray-projected hyperbolic Navier-Stokes system.

pub mod initial;
pub mod pressure;
pub mod run;
pub mod stepper;

pub use initial::{make_initial_data, well_prepared_slope, DataKind, DataSpec, Preparation};
pub use pressure::pressure_reconstruct;
pub use run::{hns_run, hns_run_observed, RunOptions};
pub use stepper::{hns_step, HnsState, HnsStepper, HnsStepperConfig, Scheme};
