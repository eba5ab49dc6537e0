//! Whole-plane norms of damped-wave solutions with radial Gaussian-type data.
//!
//! For radial data `v1(r)` with Fourier transform `V(rho)` the solution is
//! `v(t)^ = g(t, rho) V(rho)`, so its norms reduce to one-dimensional
//! integrals in `rho`:
//!
//! * `||d^alpha d_t^j v||_2^2 = C_alpha / (4 pi^2) int rho^(2|alpha|+1) |g^(j)|^2 |V|^2 drho`
//!   with `C_alpha = int_0^(2 pi) cos^(2a) sin^(2b) = 2 Gamma(a+1/2) Gamma(b+1/2) / Gamma(a+b+1)`;
//! * `d_t^j v(r) = (1/2pi) int g^(j) V J0(rho r) rho drho`, and a first
//!   derivative has modulus bounded by `|d/dr|` with
//!   `d/dr = -(1/2pi) int g^(j) V J1(rho r) rho^2 drho`.

use serde::{Deserialize, Serialize};

use super::damped::{DampedWaveParams, ModePropagator};
use super::quadrature::adaptive;
use crate::error::{Error, Result};
use crate::spectral::MultiIndex;

/// Target relative accuracy of every oracle integral.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// Radial profile with a closed-form Fourier transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RadialProfile {
    /// `A exp(-r^2 / (2 s^2))`.
    Gaussian { amplitude: f64, width: f64 },
    /// `A exp(-r^2 / (2 s^2)) (1 + c2 r^2 / s^2)`.
    GaussianPoly { amplitude: f64, width: f64, c2: f64 },
}

impl RadialProfile {
    /// Look up a catalog profile by name (`gaussian`, `gaussian-poly`).
    pub fn from_catalog(name: &str, amplitude: f64, width: f64, c2: f64) -> Result<Self> {
        if !(width > 0.0) || !amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!("profile needs width > 0, got {width}")));
        }
        match name {
            "gaussian" => Ok(Self::Gaussian { amplitude, width }),
            "gaussian-poly" => Ok(Self::GaussianPoly { amplitude, width, c2 }),
            other => Err(Error::Unsupported(format!("radial profile `{other}` is not in the catalog"))),
        }
    }

    pub fn width(&self) -> f64 {
        match *self {
            Self::Gaussian { width, .. } | Self::GaussianPoly { width, .. } => width,
        }
    }

    /// Value at radius `r`.
    pub fn value(&self, r: f64) -> f64 {
        let q = |a: f64, s: f64| a * (-r * r / (2.0 * s * s)).exp();
        match *self {
            Self::Gaussian { amplitude, width } => q(amplitude, width),
            Self::GaussianPoly { amplitude, width, c2 } => q(amplitude, width) * (1.0 + c2 * r * r / (width * width)),
        }
    }

    /// Fourier transform `int v(x) exp(-i xi.x) dx` at `|xi| = rho`.
    pub fn transform(&self, rho: f64) -> f64 {
        match *self {
            Self::Gaussian { amplitude, width: s } => 2.0 * std::f64::consts::PI * s * s * amplitude * (-s * s * rho * rho / 2.0).exp(),
            Self::GaussianPoly { amplitude, width: s, c2 } => {
                let x = s * s * rho * rho;
                2.0 * std::f64::consts::PI * s * s * amplitude * (-x / 2.0).exp() * (1.0 + c2 * (2.0 - x))
            }
        }
    }

    fn is_zero(&self) -> bool {
        match *self {
            Self::Gaussian { amplitude, .. } | Self::GaussianPoly { amplitude, .. } => amplitude == 0.0,
        }
    }
}

/// Output norm of the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleNorm {
    L2,
    Sup,
}

/// Oracle value with its self-estimated quadrature error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub t: f64,
    pub norm: f64,
    pub error_estimate: f64,
}

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

fn angular_constant(alpha: MultiIndex) -> f64 {
    let (a, b) = (alpha.0 as f64, alpha.1 as f64);
    2.0 * (ln_gamma(a + 0.5) + ln_gamma(b + 0.5) - ln_gamma(a + b + 1.0)).exp()
}

// radial cutoff beyond which the integrand is below double precision
fn cutoff(profile: &RadialProfile, t: f64, params: &DampedWaveParams<f64>) -> f64 {
    let s = profile.width();
    let mut rho = 12.0 / s;
    if t / (2.0 * params.tau()) > 45.0 && t > 0.0 {
        rho = rho.min((45.0 / (params.mu() * t)).sqrt().max(0.0));
        rho = rho.max(1e-3 / s);
    }
    rho
}

fn symbol(prop: &ModePropagator<f64>, t: f64, j: u32) -> f64 {
    let c = prop.coefficients(t);
    if j == 0 {
        c.g
    } else {
        c.dg
    }
}

/// `||d^alpha d_t^j v(t)||` on the whole plane for the solution with `v(0) = 0`, `v_t(0) = v1`.
///
/// `L2` supports any `alpha`; `Sup` supports `|alpha| <= 1`.
pub fn dw_wholespace_norm_oracle(
    profile: &RadialProfile,
    t: f64,
    params: &DampedWaveParams<f64>,
    alpha: MultiIndex,
    j: u32,
    norm: OracleNorm,
) -> Result<OracleValue> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be non-negative, got {t}")));
    }
    if j > 1 {
        return Err(Error::InvalidParameter(format!("time-derivative order must be 0 or 1, got {j}")));
    }
    if profile.is_zero() {
        return Ok(OracleValue { t, norm: 0.0, error_estimate: 0.0 });
    }
    let rho_max = cutoff(profile, t, params);
    let mode = |rho: f64| ModePropagator::new(params, rho * rho);
    match norm {
        OracleNorm::L2 => {
            let p = 2 * alpha.order() as i32 + 1;
            let integrand = |rho: f64| {
                let v = symbol(&mode(rho), t, j) * profile.transform(rho);
                rho.powi(p) * v * v
            };
            let r = adaptive(integrand, 0.0, rho_max, 64, ORACLE_TOLERANCE)?;
            check_convergence(r.value, r.error)?;
            let c = angular_constant(alpha) / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
            let norm = (c * r.value).max(0.0).sqrt();
            // relative error of a square root is half that of its argument
            let rel = if r.value > 0.0 { 0.5 * r.error / r.value } else { 0.0 };
            Ok(OracleValue { t, norm, error_estimate: rel * norm })
        }
        OracleNorm::Sup => {
            if alpha.order() > 1 {
                return Err(Error::Unsupported(format!("sup norm needs |alpha| <= 1, got {}", alpha.order())));
            }
            let first = alpha.order() == 1;
            let radial = |r: f64| -> Result<(f64, f64)> {
                let f = |rho: f64| {
                    let w = symbol(&mode(rho), t, j) * profile.transform(rho) * rho;
                    if first {
                        -w * rho * libm::j1(rho * r)
                    } else {
                        w * libm::j0(rho * r)
                    }
                };
                let panels = 64 + (r * rho_max / 2.0).ceil() as usize;
                let res = adaptive(f, 0.0, rho_max, panels, ORACLE_TOLERANCE)?;
                let scale = 1.0 / (2.0 * std::f64::consts::PI);
                Ok(((res.value * scale).abs(), res.error * scale))
            };
            sup_over_radius(radial, oracle_extent(profile, t, params)).map(|(norm, error_estimate)| OracleValue { t, norm, error_estimate })
        }
    }
}

fn check_convergence(value: f64, error: f64) -> Result<()> {
    if error > 1e-8 * value.abs().max(f64::MIN_POSITIVE) && value != 0.0 {
        return Err(Error::Quadrature(format!("relative error estimate {:.3e} above 1e-8", error / value.abs())));
    }
    Ok(())
}

/// Radius containing the solution at time `t`: diffusive spreading plus the damped wave front.
pub fn oracle_extent(profile: &RadialProfile, t: f64, params: &DampedWaveParams<f64>) -> f64 {
    let s = profile.width();
    let diffusive = 8.0 * (s * s + 2.0 * params.mu() * t).sqrt();
    let front = if t / (2.0 * params.tau()) < 40.0 { (params.mu() / params.tau()).sqrt() * t + 8.0 * s } else { 0.0 };
    diffusive.max(front)
}

fn sup_over_radius(f: impl Fn(f64) -> Result<(f64, f64)>, extent: f64) -> Result<(f64, f64)> {
    const SAMPLES: usize = 160;
    let h = extent / SAMPLES as f64;
    let mut vals = Vec::with_capacity(SAMPLES + 1);
    for i in 0..=SAMPLES {
        vals.push(f(i as f64 * h)?);
    }
    let (mut best_i, mut best) = (0, vals[0]);
    for (i, v) in vals.iter().enumerate() {
        if v.0 > best.0 {
            best_i = i;
            best = *v;
        }
    }
    // golden-section refinement around the best sample
    let (mut a, mut b) = ((best_i as f64 - 1.0).max(0.0) * h, (best_i as f64 + 1.0).min(SAMPLES as f64) * h);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..60 {
        if (b - a) < 1e-12 * extent.max(1.0) {
            break;
        }
        if fc.0 > fd.0 {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    for cand in [fc, fd] {
        if cand.0 > best.0 {
            best = cand;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn catalog_lookup() {
        assert!(RadialProfile::from_catalog("gaussian", 1.0, 1.0, 0.0).is_ok());
        assert!(matches!(RadialProfile::from_catalog("tophat", 1.0, 1.0, 0.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn transforms_match_numerical_hankel() {
        for p in
            [RadialProfile::Gaussian { amplitude: 1.3, width: 0.7 }, RadialProfile::GaussianPoly { amplitude: 0.4, width: 1.1, c2: 0.8 }]
        {
            for &rho in &[0.0, 0.5, 2.0] {
                let r = adaptive(|r| 2.0 * PI * r * p.value(r) * libm::j0(rho * r), 0.0, 40.0, 64, 1e-13).unwrap();
                assert!((r.value - p.transform(rho)).abs() < 1e-10, "{p:?} rho={rho}");
            }
        }
    }

    #[test]
    fn zero_profile_and_t0() {
        let params = DampedWaveParams::new(0.1, 1.0).unwrap();
        let zero = RadialProfile::Gaussian { amplitude: 0.0, width: 1.0 };
        let v = dw_wholespace_norm_oracle(&zero, 3.0, &params, MultiIndex::ZERO, 0, OracleNorm::L2).unwrap();
        assert_eq!(v.norm, 0.0);
        // v_t(0) = v1: ||v1||_2^2 = pi s^2 A^2 and ||v1||_inf = A
        let p = RadialProfile::Gaussian { amplitude: 2.0, width: 1.5 };
        let l2 = dw_wholespace_norm_oracle(&p, 0.0, &params, MultiIndex::ZERO, 1, OracleNorm::L2).unwrap();
        assert!((l2.norm - (PI * 1.5 * 1.5 * 4.0).sqrt()).abs() < 1e-9);
        let sup = dw_wholespace_norm_oracle(&p, 0.0, &params, MultiIndex::ZERO, 1, OracleNorm::Sup).unwrap();
        assert!((sup.norm - 2.0).abs() < 1e-9);
        // sup of d_x of a Gaussian: A/s * exp(-1/2)
        let d = dw_wholespace_norm_oracle(&p, 0.0, &params, MultiIndex(1, 0), 1, OracleNorm::Sup).unwrap();
        assert!((d.norm - 2.0 / 1.5 * (-0.5f64).exp()).abs() < 1e-9);
        assert!(dw_wholespace_norm_oracle(&p, 1.0, &params, MultiIndex(1, 1), 0, OracleNorm::Sup).is_err());
    }
}
