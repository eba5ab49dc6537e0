//! Trajectory driver for the hyperbolic system.

use super::stepper::{HnsState, HnsStepper, HnsStepperConfig};
use crate::diagnostics::{BatteryConfig, RepresentationTracker, StateSample, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::schedule::output_steps;
use crate::spectral::{leray_project, SpectralField};

/// What to keep besides the norm battery.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunOptions {
    /// Store `(u, w)` at every output time.
    pub keep_states: bool,
    /// Maintain the representation-formula accumulator and residual column.
    pub track_representation: bool,
}

/// Integrate from `(u0, u1)` at `t = 0` and evaluate the norm battery at `times`.
///
/// Non-solenoidal data are projected with a warning. A step failure
/// (instability or CFL violation) ends the run; the record is returned with
/// the rows collected so far and `complete = false`.
pub fn hns_run<T: Real>(
    u0: &SpectralField<T>,
    u1: &SpectralField<T>,
    tau: T,
    mu: T,
    cfg: &HnsStepperConfig,
    times: &[f64],
    battery: &BatteryConfig,
    options: RunOptions,
) -> Result<TrajectoryRecord<T>> {
    hns_run_observed(u0, u1, tau, mu, cfg, times, battery, options, |_| Ok(()))
}

/// [`hns_run`] calling `observe` with the state at every output time after
/// its norm row is recorded. An error from `observe` aborts the run.
pub fn hns_run_observed<T: Real>(
    u0: &SpectralField<T>,
    u1: &SpectralField<T>,
    tau: T,
    mu: T,
    cfg: &HnsStepperConfig,
    times: &[f64],
    battery: &BatteryConfig,
    options: RunOptions,
    mut observe: impl FnMut(&HnsState<T>) -> Result<()>,
) -> Result<TrajectoryRecord<T>> {
    let prepare = |f: &SpectralField<T>, name: &str| -> Result<SpectralField<T>> {
        if f.is_solenoidal() {
            Ok(f.clone())
        } else {
            log::warn!("{name} is not flagged solenoidal; applying the Leray projection");
            leray_project(f)
        }
    };
    let (u0, u1) = (prepare(u0, "u0")?, prepare(u1, "u1")?);
    let stepper = HnsStepper::new(u0.grid(), tau, mu, *cfg)?;
    let steps = output_steps(times, cfg.dt)?;
    let mut state = HnsState::new(u0.clone(), u1.clone(), T::zero(), tau, mu)?;
    let mut tracker = if options.track_representation { Some(RepresentationTracker::new(&u0, &u1, tau, mu, stepper.dt())) } else { None };
    let mut record = TrajectoryRecord::new(battery.clone());
    let mut done = 0u64;
    for target in steps {
        while done < target {
            if let Err(e) = stepper.step(&mut state) {
                log::warn!("run stopped: {e}");
                record.fail(e);
                return Ok(record);
            }
            done += 1;
            if let Some(tr) = tracker.as_mut() {
                tr.advance(&state.u);
            }
        }
        state.t = T::lit(done as f64 * cfg.dt);
        let residual = tracker.as_ref().map(|tr| tr.residual(&state)).transpose()?;
        let row = battery.evaluate_hns(&state, residual)?;
        if !row.is_finite() {
            record.fail(Error::Instability { time: state.t.to_f64_lossy(), tau: tau.to_f64_lossy(), dt: cfg.dt, n: state.grid().n() });
            return Ok(record);
        }
        record.push(row);
        if options.keep_states {
            record.states.push(StateSample { t: state.t.to_f64_lossy(), u: state.u.clone(), w: state.w.clone() });
        }
        observe(&state)?;
    }
    record.accumulator = tracker;
    Ok(record)
}
