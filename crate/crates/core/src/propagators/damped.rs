//! Per-mode solution operators of `tau v_tt - mu Lap v + v_t = 0` and of the heat equation.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::quadrature::gl12;
use crate::error::{Error, Result};
use crate::scalar::{shc, sinc, Real};
use crate::spectral::SpectralField;

/// Discriminant magnitude below which a mode is tagged critical.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

/// Relaxation time and viscosity of the damped wave equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DampedWaveParams<T> {
    tau: T,
    mu: T,
}

impl<T: Real> DampedWaveParams<T> {
    /// Requires `0 < tau <= 1` and `mu > 0`.
    pub fn new(tau: T, mu: T) -> Result<Self> {
        if !(tau > T::zero() && tau <= T::one()) {
            return Err(Error::InvalidParameter(format!("tau must lie in (0, 1], got {tau}")));
        }
        if !(mu > T::zero() && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
        }
        Ok(Self { tau, mu })
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn mu(&self) -> T {
        self.mu
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Overdamped,
    Critical,
    Oscillatory,
}

/// Entries of the 2x2 propagator `exp(A t)` with `A = [[0, 1], [-mu k^2/tau, -1/tau]]`.
///
/// `g` is the impulse response (`g(0) = 0`, `g'(0) = 1`), so
/// `(v, v_t)(t) = (h v0 + g v1, h' v0 + g' v1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeCoefficients<T> {
    pub h: T,
    pub g: T,
    pub dh: T,
    pub dg: T,
}

/// Characteristic data of one Fourier mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModePropagator<T> {
    k2: T,
    tau: T,
    mu: T,
    disc: T,
    sigma: T,
    delta: T,
    regime: Regime,
}

impl<T: Real> ModePropagator<T> {
    pub fn new(params: &DampedWaveParams<T>, k2: T) -> Self {
        let (tau, mu) = (params.tau, params.mu);
        let four = T::lit(4.0);
        let disc = T::one() - four * tau * mu * k2;
        let regime = if disc.abs() <= T::lit(CRITICAL_TOLERANCE) {
            Regime::Critical
        } else if disc > T::zero() {
            Regime::Overdamped
        } else {
            Regime::Oscillatory
        };
        let two_tau = tau + tau;
        Self { k2, tau, mu, disc, sigma: -T::one() / two_tau, delta: disc.abs().sqrt() / two_tau, regime }
    }

    pub fn k2(&self) -> T {
        self.k2
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `1 - 4 tau mu |k|^2`.
    pub fn discriminant(&self) -> T {
        self.disc
    }

    /// Roots `(lambda_+, lambda_-)` of `tau l^2 + l + mu |k|^2 = 0`.
    pub fn roots(&self) -> (Complex<T>, Complex<T>) {
        if self.disc >= T::zero() {
            let sq = self.disc.sqrt();
            let plus = -(T::lit(2.0) * self.mu * self.k2) / (T::one() + sq);
            let minus = -(T::one() + sq) / (self.tau + self.tau);
            (Complex::new(plus, T::zero()), Complex::new(minus, T::zero()))
        } else {
            (Complex::new(self.sigma, self.delta), Complex::new(self.sigma, -self.delta))
        }
    }

    /// Propagator entries at time `t >= 0`.
    pub fn coefficients(&self, t: T) -> ModeCoefficients<T> {
        let (sigma, delta) = (self.sigma, self.delta);
        let x = delta * t;
        let kappa_over_tau = self.mu * self.k2 / self.tau;
        if self.disc > T::zero() && x > T::lit(0.5) {
            // separated real roots: no cancellation in the difference of exponentials
            let sq = self.disc.sqrt();
            let lp = -(T::lit(2.0) * self.mu * self.k2) / (T::one() + sq);
            let lm = -(T::one() + sq) / (self.tau + self.tau);
            let diff = sq / self.tau;
            let (ep, em) = ((lp * t).exp(), (lm * t).exp());
            let g = (ep - em) / diff;
            let dg = (lp * ep - lm * em) / diff;
            let h = (lp * em - lm * ep) / diff;
            return ModeCoefficients { h, g, dh: -kappa_over_tau * g, dg };
        }
        let (c, s) = if self.disc >= T::zero() { (x.cosh(), shc(x)) } else { (x.cos(), sinc(x)) };
        let e = (sigma * t).exp();
        let st = sigma * t;
        let g = e * t * s;
        ModeCoefficients { h: e * (c - st * s), g, dh: -kappa_over_tau * g, dg: e * (c + st * s) }
    }

    /// `(int_0^h g, int_0^h (h - s) g(s) ds)` by composite Gauss-Legendre quadrature.
    pub fn impulse_integrals(&self, h: T) -> (T, T) {
        let rate = self.sigma.abs().max(self.delta).to_f64_lossy();
        let hf = h.to_f64_lossy();
        let panels = ((rate * hf / 2.0).ceil() as usize).max(1);
        let (nodes, weights) = gl12();
        let width = hf / panels as f64;
        let (mut g1, mut g2) = (0.0, 0.0);
        for p in 0..panels {
            let centre = (p as f64 + 0.5) * width;
            for (xi, wi) in nodes.iter().zip(weights) {
                let s = centre + 0.5 * width * xi;
                let g = self.coefficients(T::lit(s)).g.to_f64_lossy();
                let w = wi * 0.5 * width;
                g1 += w * g;
                g2 += w * (hf - s) * g;
            }
        }
        (T::lit(g1), T::lit(g2))
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

/// Solution of the damped wave equation with `v(0) = 0`, `v_t(0) = v1`, or its
/// time derivative when `j = 1`.
pub fn dw_propagate<T: Real>(v1: &SpectralField<T>, t: T, params: &DampedWaveParams<T>, j: u32) -> Result<SpectralField<T>> {
    check_time(t)?;
    if j > 1 {
        return Err(Error::InvalidParameter(format!("time-derivative order must be 0 or 1, got {j}")));
    }
    let factor = per_lattice(
        v1,
        |prop| {
            let c = prop.coefficients(t);
            if j == 0 {
                c.g
            } else {
                c.dg
            }
        },
        params,
    );
    let mut out = v1.clone();
    out.apply_multiplier(&factor);
    Ok(out)
}

/// Advance the full state `(v, v_t)` by `t`.
pub fn dw_evolve<T: Real>(
    v0: &SpectralField<T>,
    v1: &SpectralField<T>,
    t: T,
    params: &DampedWaveParams<T>,
) -> Result<(SpectralField<T>, SpectralField<T>)> {
    check_time(t)?;
    v0.require_same_grid(v1)?;
    if v0.n_components() != v1.n_components() {
        return Err(Error::ComponentMismatch { expected: v0.n_components(), found: v1.n_components() });
    }
    let coeffs = per_lattice(v0, |prop| prop.coefficients(t), params);
    let mut v = v0.clone();
    let mut vt = v1.clone();
    for ((a, b), (p, q)) in
        v.components_mut().iter_mut().zip(vt.components_mut().iter_mut()).zip(v0.components().iter().zip(v1.components()))
    {
        for i in 0..a.len() {
            let c = coeffs[i];
            a[i] = p[i] * c.h + q[i] * c.g;
            b[i] = p[i] * c.dh + q[i] * c.dg;
        }
    }
    v.set_solenoidal(v0.is_solenoidal() && v1.is_solenoidal());
    vt.set_solenoidal(v0.is_solenoidal() && v1.is_solenoidal());
    Ok((v, vt))
}

/// Multiply by `exp(-mu |k|^2 t)`.
pub fn heat_propagate<T: Real>(v0: &SpectralField<T>, t: T, mu: T) -> Result<SpectralField<T>> {
    check_time(t)?;
    let factor: Vec<T> = v0.grid().k2().iter().map(|&k| (-mu * k * t).exp()).collect();
    let mut out = v0.clone();
    out.apply_multiplier(&factor);
    Ok(out)
}

// Evaluate a per-mode quantity once per distinct lattice radius.
pub(crate) fn per_lattice<T: Real, V: Copy>(
    f: &SpectralField<T>,
    eval: impl Fn(&ModePropagator<T>) -> V,
    params: &DampedWaveParams<T>,
) -> Vec<V> {
    let grid = f.grid();
    let lattice = grid.lattice_radius2();
    let k2 = grid.k2();
    let mut cache: std::collections::HashMap<u32, V> = std::collections::HashMap::new();
    (0..grid.len()).map(|i| *cache.entry(lattice[i]).or_insert_with(|| eval(&ModePropagator::new(params, k2[i])))).collect()
}
