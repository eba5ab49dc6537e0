//! Classical incompressible Navier-Stokes in velocity form.
//!
//! `v_t = mu Lap v - P[(v.grad)v]`, integrated by a fourth-order Runge-Kutta
//! scheme in the integrating factor `exp(mu Lap t)` (the viscous part is exact).

use crate::diagnostics::{BatteryConfig, StateSample, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::schedule::output_steps;
use crate::spectral::nonlinear::advective_flux;
use crate::spectral::ops::leray_in_place;
use crate::spectral::{laplacian, SpectralField};

/// Advective Courant number limit `dt |v|_inf N / L`.
pub const CFL_LIMIT: f64 = 0.5;

/// Mean-mode magnitude tolerated by [`NsState::new`].
const MEAN_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct NsState<T: Real> {
    pub v: SpectralField<T>,
    pub t: T,
    pub mu: T,
}

impl<T: Real> NsState<T> {
    /// Requires a solenoidal-flagged, mean-zero velocity and `mu > 0`.
    pub fn new(v: SpectralField<T>, t: T, mu: T) -> Result<Self> {
        validate_velocity(&v)?;
        if !(mu > T::zero()) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
        }
        Ok(Self { v, t, mu })
    }
}

pub(crate) fn validate_velocity<T: Real>(v: &SpectralField<T>) -> Result<()> {
    v.require_components(2)?;
    if !v.is_solenoidal() {
        return Err(Error::NotSolenoidal(v.divergence_defect().to_f64_lossy()));
    }
    let scale = v.coefficient_norm().max(T::one());
    if v.mean().iter().any(|c| c.norm() > T::lit(MEAN_TOLERANCE) * scale) {
        return Err(Error::InvalidParameter("velocity must have zero mean".into()));
    }
    Ok(())
}

// -P[(v.grad)v] and max |v|
fn rhs<T: Real>(v: &SpectralField<T>) -> (SpectralField<T>, T) {
    let f = advective_flux(v, None, T::zero());
    let mut value = f.value;
    leray_in_place(&mut value);
    (value, f.max_speed)
}

/// `v_t = mu Lap v - P[(v.grad)v]`.
pub fn ns_time_derivative<T: Real>(state: &NsState<T>) -> SpectralField<T> {
    let (mut n, _) = rhs(&state.v);
    n.axpy(state.mu, &laplacian(&state.v));
    n
}

/// Fixed-step integrating-factor RK4 stepper.
#[derive(Clone, Debug)]
pub struct NsSolver<T: Real> {
    dt: T,
    mu: T,
    cfl_limit: T,
    half: Vec<T>,
    full: Vec<T>,
}

impl<T: Real> NsSolver<T> {
    pub fn new(grid: &crate::spectral::Grid<T>, mu: T, dt: T) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let half: Vec<T> = grid.k2().iter().map(|&k| (-mu * k * dt / T::lit(2.0)).exp()).collect();
        let full = half.iter().map(|&e| e * e).collect();
        Ok(Self { dt, mu, cfl_limit: T::lit(CFL_LIMIT), half, full })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn with_cfl_limit(mut self, limit: T) -> Self {
        self.cfl_limit = limit;
        self
    }

    /// Advance by one step.
    pub fn step(&self, state: &mut NsState<T>) -> Result<()> {
        if state.mu != self.mu {
            return Err(Error::InvalidParameter("state viscosity differs from the solver's".into()));
        }
        let dt = self.dt;
        let grid = state.v.grid().clone();
        let v = &state.v;
        let (k1, speed) = rhs(v);
        let courant = (dt * speed * T::from_count(grid.n()) / grid.length()).to_f64_lossy();
        if courant > self.cfl_limit.to_f64_lossy() {
            return Err(Error::Cfl { courant, limit: self.cfl_limit.to_f64_lossy(), time: state.t.to_f64_lossy() });
        }
        let h2 = dt / T::lit(2.0);
        let mut ev = v.clone();
        ev.apply_multiplier(&self.half);
        let mut a = v.clone();
        a.axpy(h2, &k1);
        a.apply_multiplier(&self.half);
        let (k2, _) = rhs(&a);
        let mut b = ev.clone();
        b.axpy(h2, &k2);
        let (k3, _) = rhs(&b);
        let mut c = ev.clone();
        c.apply_multiplier(&self.half);
        let mut ek3 = k3.clone();
        ek3.apply_multiplier(&self.half);
        c.axpy(dt, &ek3);
        let (k4, _) = rhs(&c);
        // v+ = E^2 v + dt/6 (E^2 k1 + 2 E (k2 + k3) + k4)
        let mut mid = k2;
        mid.axpy(T::one(), &k3);
        mid.apply_multiplier(&self.half);
        let mut out = v.clone();
        out.axpy(dt / T::lit(6.0), &k1);
        out.apply_multiplier(&self.full);
        out.axpy(dt / T::lit(3.0), &mid);
        out.axpy(dt / T::lit(6.0), &k4);
        if !out.is_finite() {
            return Err(Error::Instability { time: state.t.to_f64_lossy(), tau: 0.0, dt: dt.to_f64_lossy(), n: grid.n() });
        }
        out.set_solenoidal(true);
        state.v = out;
        state.t = state.t + dt;
        Ok(())
    }

    /// Step through `times` (multiples of `dt`, measured from the state's
    /// current time) calling `observe` at each of them.
    pub fn run(&self, state: &mut NsState<T>, times: &[f64], mut observe: impl FnMut(&NsState<T>) -> Result<()>) -> Result<()> {
        let steps = output_steps(times, self.dt.to_f64_lossy())?;
        let t0 = state.t;
        let mut done = 0u64;
        for target in steps {
            while done < target {
                self.step(state)?;
                done += 1;
            }
            // avoid drift from repeated addition
            state.t = t0 + T::from_u64(done).unwrap() * self.dt;
            observe(state)?;
        }
        Ok(())
    }
}

/// Integrate from `v0` at `t = 0` and evaluate the norm battery at `times`.
///
/// A step failure ends the run; the partial record is returned with `complete = false`.
pub fn ns_run<T: Real>(
    v0: &SpectralField<T>,
    mu: T,
    dt: T,
    times: &[f64],
    battery: &BatteryConfig,
    keep_states: bool,
) -> Result<TrajectoryRecord<T>> {
    ns_run_observed(v0, mu, dt, times, battery, keep_states, |_| Ok(()))
}

/// [`ns_run`] calling `observe` with the state at every output time after
/// its norm row is recorded.
pub fn ns_run_observed<T: Real>(
    v0: &SpectralField<T>,
    mu: T,
    dt: T,
    times: &[f64],
    battery: &BatteryConfig,
    keep_states: bool,
    mut observe: impl FnMut(&NsState<T>) -> Result<()>,
) -> Result<TrajectoryRecord<T>> {
    let solver = NsSolver::new(v0.grid(), mu, dt)?;
    let mut state = NsState::new(v0.clone(), T::zero(), mu)?;
    let mut record = TrajectoryRecord::new(battery.clone());
    let result = solver.run(&mut state, times, |s| {
        let row = battery.evaluate_ns(s)?;
        if !row.is_finite() {
            return Err(Error::Instability { time: s.t.to_f64_lossy(), tau: 0.0, dt: dt.to_f64_lossy(), n: s.v.grid().n() });
        }
        record.push(row);
        if keep_states {
            let w = ns_time_derivative(s);
            record.states.push(StateSample { t: s.t.to_f64_lossy(), u: s.v.clone(), w });
        }
        observe(s)
    });
    match result {
        Ok(()) => Ok(record),
        Err(e @ (Error::Instability { .. } | Error::Cfl { .. })) => {
            log::warn!("run stopped: {e}");
            record.fail(e);
            Ok(record)
        }
        Err(e) => Err(e),
    }
}

/// One integrating-factor RK4 step of size `dt`.
pub fn ns_step<T: Real>(state: &NsState<T>, dt: T) -> Result<NsState<T>> {
    let solver = NsSolver::new(state.v.grid(), state.mu, dt)?;
    let mut next = state.clone();
    solver.step(&mut next)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{leray_project, Grid};
    use std::f64::consts::PI;

    fn tg(g: &Grid<f64>) -> SpectralField<f64> {
        SpectralField::from_fn_vector(g, |x, y| (x.sin() * y.cos(), -x.cos() * y.sin())).mark_solenoidal().unwrap()
    }

    #[test]
    fn zero_stays_zero() {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        let s = NsState::new(SpectralField::zeros(&g, 2), 0.0, 1.0).unwrap();
        assert!(ns_step(&s, 0.1).unwrap().v.is_zero());
    }

    #[test]
    fn taylor_green_decays_exactly() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let u0 = tg(&g);
        let mut s = NsState::new(u0.clone(), 0.0, 0.5).unwrap();
        let solver = NsSolver::new(&g, 0.5, 0.01).unwrap();
        solver.run(&mut s, &[1.0], |_| Ok(())).unwrap();
        let exact = u0.scaled((-1.0f64).exp());
        assert!((&s.v - &exact).coefficient_norm() < 1e-12);
        assert!((s.t - 1.0).abs() < 1e-15);
        let d = ns_time_derivative(&NsState::new(u0.clone(), 0.0, 1.0).unwrap());
        assert!((&d + &u0.scaled(2.0)).coefficient_norm() < 1e-12);
    }

    #[test]
    fn rejects_cfl_and_non_solenoidal() {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        let s = NsState::new(tg(&g).scaled(100.0), 0.0, 1.0).unwrap();
        assert!(matches!(ns_step(&s, 0.1), Err(Error::Cfl { .. })));
        let bad = SpectralField::from_fn_vector(&g, |x, _| (x.sin(), 0.0));
        assert!(NsState::new(bad, 0.0, 1.0).is_err());
    }

    #[test]
    fn preserves_solenoidality_on_random_data() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let u = leray_project(&SpectralField::from_fn_vector(&g, |x, y| ((2.0 * y).sin() + x.cos(), (x - y).sin()))).unwrap();
        let mut s = NsState::new(u, 0.0, 0.1).unwrap();
        let solver = NsSolver::new(&g, 0.1, 0.01).unwrap();
        for _ in 0..20 {
            solver.step(&mut s).unwrap();
            assert!(s.v.divergence_defect() < 1e-12);
        }
    }
}
