//! Time stepping of the projected hyperbolic system.
//!
//! Per Fourier mode the state `(u, w = u_t)` obeys
//! `y' = A y + (0, F(u, w))`, `A = [[0, 1], [-mu |k|^2 / tau, -1/tau]]`,
//! `F = (1/tau) * nonlinearity(u, w, tau)`. The linear block is integrated
//! exactly; the forcing enters either through the exponential
//! Runge-Kutta scheme of Cox and Matthews (default) or through Strang
//! splitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ns::validate_velocity;
use crate::propagators::damped::{per_lattice, ModeCoefficients};
use crate::propagators::DampedWaveParams;
use crate::scalar::Real;
use crate::spectral::nonlinear::advective_flux;
use crate::spectral::ops::leray_in_place;
use crate::spectral::{Grid, SpectralField};

#[derive(Clone, Debug)]
pub struct HnsState<T: Real> {
    pub u: SpectralField<T>,
    /// Time derivative `u_t`.
    pub w: SpectralField<T>,
    pub t: T,
    pub tau: T,
    pub mu: T,
}

impl<T: Real> HnsState<T> {
    /// Requires solenoidal, mean-zero `u` and `w` on one grid, `0 < tau <= 1`, `mu > 0`.
    pub fn new(u: SpectralField<T>, w: SpectralField<T>, t: T, tau: T, mu: T) -> Result<Self> {
        validate_velocity(&u)?;
        validate_velocity(&w)?;
        u.require_same_grid(&w)?;
        DampedWaveParams::new(tau, mu)?;
        Ok(Self { u, w, t, tau, mu })
    }

    pub fn params(&self) -> DampedWaveParams<T> {
        DampedWaveParams::new(self.tau, self.mu).expect("validated at construction")
    }

    pub fn grid(&self) -> &Grid<T> {
        self.u.grid()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Second-order exponential Runge-Kutta (ETD2RK).
    Etd2,
    /// Strang splitting: half linear step, midpoint nonlinear step, half linear step.
    Strang,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HnsStepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    /// Advective Courant limit `dt |u|_inf N / L`.
    pub cfl_limit: f64,
    /// Below this `tau` the step must satisfy `dt <= stiff_factor * tau`.
    pub stiff_threshold: f64,
    pub stiff_factor: f64,
}

impl HnsStepperConfig {
    pub fn new(dt: f64) -> Self {
        Self { dt, scheme: Scheme::Etd2, cfl_limit: 0.5, stiff_threshold: 0.05, stiff_factor: 0.5 }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// Largest step meeting both limits for an expected peak speed, reduced
    /// to `t_unit / k` for the smallest integer `k` so output times stay on the step lattice.
    pub fn auto(tau: f64, n: usize, length: f64, max_speed: f64, t_unit: f64) -> Self {
        let base = Self::new(1.0);
        let mut dt = if max_speed > 0.0 { base.cfl_limit * length / (n as f64 * max_speed) } else { t_unit };
        if tau < base.stiff_threshold {
            dt = dt.min(base.stiff_factor * tau);
        }
        let k = (t_unit / dt).ceil().max(1.0);
        Self::new(t_unit / k)
    }

    pub fn validate(&self, tau: f64) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if tau < self.stiff_threshold && self.dt > self.stiff_factor * tau * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "dt = {} exceeds {} * tau = {} required for tau < {}",
                self.dt,
                self.stiff_factor,
                self.stiff_factor * tau,
                self.stiff_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
struct EtdWeights<T> {
    full: ModeCoefficients<T>,
    g1: T,
    g2_over_h: T,
    g1_over_h: T,
}

/// Stepper with per-mode coefficients precomputed for one `(grid, tau, mu, dt)`.
#[derive(Clone, Debug)]
pub struct HnsStepper<T: Real> {
    cfg: HnsStepperConfig,
    tau: T,
    mu: T,
    n: usize,
    length: T,
    etd: Vec<EtdWeights<T>>,
    half: Vec<ModeCoefficients<T>>,
}

impl<T: Real> HnsStepper<T> {
    pub fn new(grid: &Grid<T>, tau: T, mu: T, cfg: HnsStepperConfig) -> Result<Self> {
        let params = DampedWaveParams::new(tau, mu)?;
        cfg.validate(tau.to_f64_lossy())?;
        let h = T::lit(cfg.dt);
        let probe = SpectralField::zeros(grid, 1);
        let etd = match cfg.scheme {
            Scheme::Etd2 => per_lattice(
                &probe,
                |p| {
                    let (g1, g2) = p.impulse_integrals(h);
                    EtdWeights { full: p.coefficients(h), g1, g2_over_h: g2 / h, g1_over_h: g1 / h }
                },
                &params,
            ),
            Scheme::Strang => Vec::new(),
        };
        let half = match cfg.scheme {
            Scheme::Strang => per_lattice(&probe, |p| p.coefficients(h / T::lit(2.0)), &params),
            Scheme::Etd2 => Vec::new(),
        };
        Ok(Self { cfg, tau, mu, n: grid.n(), length: grid.length(), etd, half })
    }

    pub fn config(&self) -> &HnsStepperConfig {
        &self.cfg
    }

    pub fn dt(&self) -> T {
        T::lit(self.cfg.dt)
    }

    // (1/tau) * nonlinearity(u, w, tau) and max |u|
    fn forcing(&self, u: &SpectralField<T>, w: &SpectralField<T>) -> (SpectralField<T>, T) {
        let f = advective_flux(u, Some(w), self.tau);
        let mut value = f.value;
        leray_in_place(&mut value);
        value.scale_in_place(T::one() / self.tau);
        (value, f.max_speed)
    }

    fn check_cfl(&self, speed: T, t: T) -> Result<()> {
        let courant = self.cfg.dt * (speed * T::from_count(self.n) / self.length).to_f64_lossy();
        if courant > self.cfg.cfl_limit {
            return Err(Error::Cfl { courant, limit: self.cfg.cfl_limit, time: t.to_f64_lossy() });
        }
        Ok(())
    }

    fn instability(&self, t: T) -> Error {
        Error::Instability { time: t.to_f64_lossy(), tau: self.tau.to_f64_lossy(), dt: self.cfg.dt, n: self.n }
    }

    /// Advance the state by one step.
    pub fn step(&self, state: &mut HnsState<T>) -> Result<()> {
        if state.tau != self.tau || state.mu != self.mu || state.grid().n() != self.n {
            return Err(Error::InvalidParameter("state parameters differ from the stepper's".into()));
        }
        let (u, w) = match self.cfg.scheme {
            Scheme::Etd2 => self.etd2(state)?,
            Scheme::Strang => self.strang(state)?,
        };
        if !u.is_finite() || !w.is_finite() {
            return Err(self.instability(state.t));
        }
        state.u = u;
        state.w = w;
        state.t = state.t + self.dt();
        Ok(())
    }

    fn etd2(&self, s: &HnsState<T>) -> Result<(SpectralField<T>, SpectralField<T>)> {
        let (fn_, speed) = self.forcing(&s.u, &s.w);
        if !speed.is_finite() {
            return Err(self.instability(s.t));
        }
        self.check_cfl(speed, s.t)?;
        let mut au = s.u.clone();
        let mut aw = s.w.clone();
        for c in 0..2 {
            let (u, w, f) = (s.u.component(c), s.w.component(c), fn_.component(c));
            let pu = au.component_mut(c);
            let pw = aw.component_mut(c);
            for (i, e) in self.etd.iter().enumerate() {
                pu[i] = u[i] * e.full.h + w[i] * e.full.g + f[i] * e.g1;
                pw[i] = u[i] * e.full.dh + w[i] * e.full.dg + f[i] * e.full.g;
            }
        }
        au.set_solenoidal(true);
        aw.set_solenoidal(true);
        let (fa, _) = self.forcing(&au, &aw);
        for c in 0..2 {
            let (fa, f0) = (fa.component(c), fn_.component(c));
            let pu = au.component_mut(c);
            for (i, e) in self.etd.iter().enumerate() {
                pu[i] = pu[i] + (fa[i] - f0[i]) * e.g2_over_h;
            }
            let pw = aw.component_mut(c);
            for (i, e) in self.etd.iter().enumerate() {
                pw[i] = pw[i] + (fa[i] - f0[i]) * e.g1_over_h;
            }
        }
        Ok((au, aw))
    }

    fn linear_half(&self, u: &mut SpectralField<T>, w: &mut SpectralField<T>) {
        for c in 0..2 {
            let (pu, pw) = (u.component_mut(c), w.component_mut(c));
            for (i, m) in self.half.iter().enumerate() {
                let (a, b) = (pu[i], pw[i]);
                pu[i] = a * m.h + b * m.g;
                pw[i] = a * m.dh + b * m.dg;
            }
        }
    }

    fn strang(&self, s: &HnsState<T>) -> Result<(SpectralField<T>, SpectralField<T>)> {
        let (mut u, mut w) = (s.u.clone(), s.w.clone());
        self.linear_half(&mut u, &mut w);
        let (f1, speed) = self.forcing(&u, &w);
        if !speed.is_finite() {
            return Err(self.instability(s.t));
        }
        self.check_cfl(speed, s.t)?;
        let h = self.dt();
        let mut wm = w.clone();
        wm.axpy(h / T::lit(2.0), &f1);
        let (f2, _) = self.forcing(&u, &wm);
        w.axpy(h, &f2);
        self.linear_half(&mut u, &mut w);
        u.set_solenoidal(true);
        w.set_solenoidal(true);
        Ok((u, w))
    }
}

/// One step with a freshly built stepper.
pub fn hns_step<T: Real>(state: &HnsState<T>, cfg: &HnsStepperConfig) -> Result<HnsState<T>> {
    let stepper = HnsStepper::new(state.grid(), state.tau, state.mu, *cfg)?;
    let mut next = state.clone();
    stepper.step(&mut next)?;
    Ok(next)
}
