use serde::{Deserialize, Serialize};

use super::energy::{energy_em, energy_em_ns_with, gronwall_from_norms};
use super::params::AnalysisParams;
use crate::error::Result;
use crate::hns::HnsState;
use crate::ns::{ns_time_derivative, NsState};
use crate::scalar::Real;
use crate::spectral::{
    besov_b0infinf, edge_fraction, gradient, gradient_sobolev_lebesgue_norm, gradient_sobolev_norm, rot2d, sobolev_lebesgue_norm,
    sobolev_norm, Exponent, SpectralField,
};

/// Which norms to evaluate at each output time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub analysis: AnalysisParams,
    /// `W^{m1,q}` columns.
    pub lq: bool,
    /// Besov columns for the regularity monitor.
    pub besov: bool,
}

impl BatteryConfig {
    pub fn new(analysis: AnalysisParams) -> Self {
        Self { analysis, lq: false, besov: false }
    }

    pub fn with_lq(mut self) -> Self {
        self.lq = true;
        self
    }

    pub fn with_besov(mut self) -> Self {
        self.besov = true;
        self
    }

    pub fn evaluate_hns<T: Real>(&self, s: &HnsState<T>, residual: Option<T>) -> Result<NormRow> {
        let energy = energy_em(s, self.analysis.m, T::lit(self.analysis.eps2)).to_f64_lossy();
        let mut row = self.evaluate(&s.u, &s.w, s.t, s.tau.to_f64_lossy(), energy)?;
        row.residual = residual.map(|r| r.to_f64_lossy());
        Ok(row)
    }

    pub fn evaluate_ns<T: Real>(&self, s: &NsState<T>) -> Result<NormRow> {
        let vt = ns_time_derivative(s);
        let energy = energy_em_ns_with(s, &vt, self.analysis.m, T::lit(self.analysis.tau)).to_f64_lossy();
        self.evaluate(&s.v, &vt, s.t, self.analysis.tau, energy)
    }

    fn evaluate<T: Real>(&self, u: &SpectralField<T>, ut: &SpectralField<T>, t: T, tau: f64, energy: f64) -> Result<NormRow> {
        let f = |x: T| x.to_f64_lossy();
        let (m, m1) = (self.analysis.m, self.analysis.m1);
        let inf = Exponent::Infinity;
        let rot = rot2d(u)?;
        let u_inf = f(sobolev_lebesgue_norm(u, 0, inf)?);
        let grad_u_inf = f(gradient_sobolev_lebesgue_norm(u, 0, inf)?);
        let ut_1inf = f(sobolev_lebesgue_norm(ut, 1, inf)?);
        let q = Exponent::Finite(T::lit(self.analysis.q));
        let (u_m1q, ut_m1q, grad_u_m1q) = if self.lq {
            (
                Some(f(sobolev_lebesgue_norm(u, m1, q)?)),
                Some(f(sobolev_lebesgue_norm(ut, m1, q)?)),
                Some(f(gradient_sobolev_lebesgue_norm(u, m1, q)?)),
            )
        } else {
            (None, None, None)
        };
        let (besov_rot, besov_u, besov_grad_u, besov_ut) = if self.besov {
            (Some(f(besov_b0infinf(&rot))), Some(f(besov_b0infinf(u))), Some(f(besov_b0infinf(&gradient(u)))), Some(f(besov_b0infinf(ut))))
        } else {
            (None, None, None, None)
        };
        Ok(NormRow {
            t: f(t),
            u_l2: f(sobolev_norm(u, 0)?),
            grad_u_l2: f(gradient_sobolev_norm(u, 0)?),
            ut_l2: f(sobolev_norm(ut, 0)?),
            u_inf,
            grad_u_inf,
            ut_1inf,
            rot_l2: f(sobolev_norm(&rot, 0)?),
            rot_inf: f(sobolev_lebesgue_norm(&rot, 0, inf)?),
            u_m2: f(sobolev_norm(u, m)?),
            ut_m2: f(sobolev_norm(ut, m)?),
            grad_u_m2: f(gradient_sobolev_norm(u, m)?),
            u_m1q,
            ut_m1q,
            grad_u_m1q,
            energy,
            gronwall: gronwall_from_norms(u_inf, grad_u_inf, ut_1inf, tau),
            edge_fraction: f(edge_fraction(&rot)),
            besov_rot,
            besov_u,
            besov_grad_u,
            besov_ut,
            residual: None,
        })
    }
}

/// Norm battery at one output time. `ut` is `w` for the hyperbolic system and
/// the right-hand side `v_t` for Navier-Stokes; `(m)`, `(m1, q)` orders come
/// from the [`AnalysisParams`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub t: f64,
    pub u_l2: f64,
    pub grad_u_l2: f64,
    pub ut_l2: f64,
    pub u_inf: f64,
    /// Sup of the Frobenius modulus of `grad u`.
    pub grad_u_inf: f64,
    /// `||u_t||_{1,inf}`.
    pub ut_1inf: f64,
    pub rot_l2: f64,
    pub rot_inf: f64,
    /// `||u||_{m,2}`.
    pub u_m2: f64,
    pub ut_m2: f64,
    pub grad_u_m2: f64,
    /// `||u||_{m1,q}`.
    pub u_m1q: Option<f64>,
    pub ut_m1q: Option<f64>,
    pub grad_u_m1q: Option<f64>,
    /// `E_m` (hyperbolic form, or the Navier-Stokes form for NS rows).
    pub energy: f64,
    pub gronwall: f64,
    /// Fraction of the vorticity's `L^2` mass outside the central half of the box.
    pub edge_fraction: f64,
    pub besov_rot: Option<f64>,
    pub besov_u: Option<f64>,
    pub besov_grad_u: Option<f64>,
    pub besov_ut: Option<f64>,
    pub residual: Option<f64>,
}

impl NormRow {
    pub fn is_finite(&self) -> bool {
        [self.u_l2, self.grad_u_l2, self.ut_l2, self.u_inf, self.energy, self.gronwall].iter().all(|v| v.is_finite())
    }
}
