//! Residual of the integral identity
//! `u_t + P[(u.grad)u] - (mu/tau) int_0^t exp(-(t-s)/tau) Lap u(s) ds = exp(-t/tau) (u1 + P[(u0.grad)u0])`.

use crate::error::Result;
use crate::hns::HnsState;
use crate::scalar::{phi1, phi2, Real};
use crate::spectral::nonlinear::advective_flux;
use crate::spectral::ops::leray_in_place;
use crate::spectral::{laplacian, sobolev_norm, SpectralField};

/// Recursive accumulator `R(t) = int_0^t exp(-(t-s)/tau) u(s) ds` (the
/// Laplacian is applied on evaluation), updated once per step with the
/// exponentially weighted trapezoid rule.
#[derive(Clone, Debug)]
pub struct RepresentationTracker<T: Real> {
    tau: T,
    mu: T,
    decay: T,
    c_prev: T,
    c_next: T,
    acc: SpectralField<T>,
    prev: SpectralField<T>,
    initial: SpectralField<T>,
    scale: T,
}

// P[(u.grad)u]
fn projected_advection<T: Real>(u: &SpectralField<T>) -> SpectralField<T> {
    let mut f = advective_flux(u, None, T::zero()).value;
    leray_in_place(&mut f);
    f.scale_in_place(-T::one());
    f
}

impl<T: Real> RepresentationTracker<T> {
    pub fn new(u0: &SpectralField<T>, u1: &SpectralField<T>, tau: T, mu: T, dt: T) -> Self {
        let z = -dt / tau;
        let (p1, p2) = (phi1(z), phi2(z));
        let mut initial = u1.clone();
        initial.axpy(T::one(), &projected_advection(u0));
        Self {
            tau,
            mu,
            decay: z.exp(),
            c_prev: dt * (p1 - p2),
            c_next: dt * p2,
            acc: SpectralField::zeros(u0.grid(), 2),
            prev: u0.clone(),
            initial,
            scale: sobolev_norm(u0, 2).unwrap_or(T::nan()),
        }
    }

    /// Fold in the velocity after one more step.
    pub fn advance(&mut self, u_next: &SpectralField<T>) {
        self.acc.scale_in_place(self.decay);
        self.acc.axpy(self.c_prev, &self.prev);
        self.acc.axpy(self.c_next, u_next);
        self.prev = u_next.clone();
    }

    /// `||w + P[(u.grad)u] - (mu/tau) Lap R - exp(-t/tau)(u1 + P[(u0.grad)u0])||_2 / ||u0||_{2,2}`.
    ///
    /// For zero data the unnormalized norm (zero) is returned.
    pub fn residual(&self, state: &HnsState<T>) -> Result<T> {
        let mut y = state.w.clone();
        y.axpy(T::one(), &projected_advection(&state.u));
        y.axpy(-self.mu / self.tau, &laplacian(&self.acc));
        y.axpy(-(-state.t / self.tau).exp(), &self.initial);
        let r = sobolev_norm(&y, 0)?;
        Ok(if self.scale > T::zero() { r / self.scale } else { r })
    }
}
