//! Initial data generators.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::nonlinear::advective_flux;
use crate::spectral::ops::{derivative_symbol, leray_in_place};
use crate::spectral::{laplacian, perp_gradient, sup_norm, Grid, MultiIndex, SpectralField};

/// Shape of the initial velocity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataKind {
    /// Velocity induced by a random Gaussian-enveloped vorticity `dA/dx + dB/dy`
    /// centred in the box; `width` is the envelope's standard deviation.
    LocalizedRandom { width: f64 },
    /// `(sin kx cos ky, -cos kx sin ky)` with `k = 2 pi / L`.
    TaylorGreen,
    /// Two opposite Gaussian vortices of standard deviation `width`, `3 width` apart.
    VortexPair { width: f64 },
}

impl DataKind {
    pub fn from_name(name: &str, width: f64) -> Result<Self> {
        match name {
            "localized-random" => Ok(Self::LocalizedRandom { width }),
            "taylor-green" => Ok(Self::TaylorGreen),
            "vortex-pair" => Ok(Self::VortexPair { width }),
            other => Err(Error::Unsupported(format!("initial data kind `{other}`"))),
        }
    }
}

/// Choice of `u1 = u_t(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Preparation {
    /// `u1 = mu Lap u0 - P[(u0.grad)u0]`, the Navier-Stokes initial slope.
    WellPrepared,
    Zero,
    /// Same kind as `u0` with its own amplitude and seed.
    Independent {
        amplitude: f64,
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataSpec {
    pub kind: DataKind,
    /// Peak speed `max |u0|` on the grid.
    pub amplitude: f64,
    pub seed: u64,
    pub preparation: Preparation,
}

/// Build `(u0, u1)`: solenoidal, mean zero, dealiased.
pub fn make_initial_data<T: Real>(grid: &Grid<T>, spec: &DataSpec, mu: T) -> Result<(SpectralField<T>, SpectralField<T>)> {
    if !(spec.amplitude >= 0.0) || !spec.amplitude.is_finite() {
        return Err(Error::InvalidParameter(format!("amplitude must be non-negative, got {}", spec.amplitude)));
    }
    let u0 = shape(grid, spec.kind, spec.seed)?.scaled(T::lit(spec.amplitude));
    let u1 = match spec.preparation {
        Preparation::WellPrepared => well_prepared_slope(&u0, mu),
        Preparation::Zero => SpectralField::zeros(grid, 2),
        Preparation::Independent { amplitude, seed } => {
            if !(amplitude >= 0.0) || !amplitude.is_finite() {
                return Err(Error::InvalidParameter(format!("u1 amplitude must be non-negative, got {amplitude}")));
            }
            shape(grid, spec.kind, seed)?.scaled(T::lit(amplitude))
        }
    };
    Ok((u0, u1))
}

/// `mu Lap u0 - P[(u0.grad)u0]`.
pub fn well_prepared_slope<T: Real>(u0: &SpectralField<T>, mu: T) -> SpectralField<T> {
    let mut n = advective_flux(u0, None, T::zero()).value;
    leray_in_place(&mut n);
    n.axpy(mu, &laplacian(u0));
    n.set_solenoidal(true);
    n
}

// unit-peak velocity of the requested shape
fn shape<T: Real>(grid: &Grid<T>, kind: DataKind, seed: u64) -> Result<SpectralField<T>> {
    let centre = grid.length().to_f64_lossy() / 2.0;
    let mut u = match kind {
        DataKind::TaylorGreen => {
            let k = grid.wavenumber_unit();
            let mut u = SpectralField::from_fn_vector(grid, |x, y| ((k * x).sin() * (k * y).cos(), -(k * x).cos() * (k * y).sin()));
            leray_in_place(&mut u);
            u
        }
        DataKind::VortexPair { width } => {
            check_width(grid, width)?;
            let d = 1.5 * width;
            let omega = SpectralField::from_fn_scalar(grid, |x, y| {
                let (x, y) = (x.to_f64_lossy() - centre, y.to_f64_lossy() - centre);
                let g = |dx: f64| (-((x - dx).powi(2) + y * y) / (2.0 * width * width)).exp();
                T::lit(g(-d) - g(d))
            });
            velocity_from_vorticity(omega)?
        }
        DataKind::LocalizedRandom { width } => {
            check_width(grid, width)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let mut modulation = |bias: f64| {
                let modes: Vec<(f64, f64, f64, f64)> = (0..6)
                    .map(|_| {
                        let dir: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                        let mag = rng.gen_range(0.5..1.5) / width;
                        (mag * dir.cos(), mag * dir.sin(), rng.gen_range(-0.5..0.5), rng.gen_range(0.0..std::f64::consts::TAU))
                    })
                    .collect();
                move |x: f64, y: f64| bias + modes.iter().map(|m| m.2 * (m.0 * x + m.1 * y + m.3).cos()).sum::<f64>()
            };
            let (ma, mb) = (modulation(theta.cos()), modulation(theta.sin()));
            let envelope = |x: f64, y: f64| (-(x * x + y * y) / (2.0 * width * width)).exp();
            let potentials = SpectralField::from_fn_vector(grid, |x, y| {
                let (x, y) = (x.to_f64_lossy() - centre, y.to_f64_lossy() - centre);
                let e = envelope(x, y);
                (T::lit(e * ma(x, y)), T::lit(e * mb(x, y)))
            });
            let dx = derivative_symbol(&potentials, MultiIndex(1, 0));
            let dy = derivative_symbol(&potentials, MultiIndex(0, 1));
            let (a, b) = (potentials.component(0), potentials.component(1));
            let w: Vec<Complex<T>> = (0..grid.len()).map(|i| dx[i] * a[i] + dy[i] * b[i]).collect();
            velocity_from_vorticity(SpectralField::from_coefficients(grid, vec![w])?)?
        }
    };
    u.dealias_in_place();
    for c in u.components_mut() {
        c[0] = Complex::new(T::zero(), T::zero());
    }
    let peak = sup_norm(&u);
    if !(peak > T::zero()) {
        return Err(Error::InvalidParameter("generated velocity vanishes on this grid".into()));
    }
    u.scale_in_place(T::one() / peak);
    u.set_solenoidal(true);
    Ok(u)
}

fn check_width<T: Real>(grid: &Grid<T>, width: f64) -> Result<()> {
    let l = grid.length().to_f64_lossy();
    if !(width > 0.0) || width > l / 8.0 {
        return Err(Error::InvalidParameter(format!("width must lie in (0, L/8], got {width} for L = {l}")));
    }
    Ok(())
}

fn velocity_from_vorticity<T: Real>(mut omega: SpectralField<T>) -> Result<SpectralField<T>> {
    omega.dealias_in_place();
    let k2 = omega.grid().k2().to_vec();
    let inv: Vec<T> = k2.iter().map(|&k| if k > T::zero() { T::one() / k } else { T::zero() }).collect();
    omega.apply_multiplier(&inv);
    perp_gradient(&omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{rot2d, sobolev_norm};
    use std::f64::consts::PI;

    #[test]
    fn taylor_green_is_well_prepared() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let spec = DataSpec { kind: DataKind::TaylorGreen, amplitude: 1.0, seed: 0, preparation: Preparation::WellPrepared };
        let (u0, u1) = make_initial_data(&g, &spec, 0.3).unwrap();
        let exact = SpectralField::from_fn_vector(&g, |x, y| (x.sin() * y.cos(), -x.cos() * y.sin()));
        assert!((&u0 - &exact).coefficient_norm() < 1e-14);
        assert!((&u1 - &u0.scaled(-0.6)).coefficient_norm() < 1e-13);
    }

    #[test]
    fn localized_random_is_deterministic_and_homogeneous() {
        let g = Grid::<f64>::new(64, 40.0).unwrap();
        let mk = |amplitude: f64, seed: u64| {
            let spec = DataSpec { kind: DataKind::LocalizedRandom { width: 2.0 }, amplitude, seed, preparation: Preparation::Zero };
            make_initial_data::<f64>(&g, &spec, 1.0).unwrap().0
        };
        let (a, b) = (mk(0.5, 7), mk(0.5, 7));
        assert_eq!(a.components(), b.components());
        let c = mk(1.0, 7);
        assert!((sobolev_norm(&c, 2).unwrap() - 2.0 * sobolev_norm(&a, 2).unwrap()).abs() < 1e-12);
        assert!(a.divergence_defect() < 1e-14);
        assert!(a.mean().iter().all(|m| m.norm() == 0.0));
        assert!((sup_norm(&a) - 0.5).abs() < 1e-14);
        assert!((&mk(0.5, 8) - &a).coefficient_norm() > 1e-3);
        // vorticity localized in the central half
        let w = rot2d(&a).unwrap();
        assert!(crate::spectral::edge_fraction(&w) < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        assert!(DataKind::from_name("shear-layer", 1.0).is_err());
        let spec = DataSpec { kind: DataKind::TaylorGreen, amplitude: -1.0, seed: 0, preparation: Preparation::Zero };
        assert!(make_initial_data(&g, &spec, 1.0).is_err());
        let zero = DataSpec { amplitude: 0.0, ..spec };
        let (u0, u1) = make_initial_data(&g, &zero, 1.0).unwrap();
        assert!(u0.is_zero() && u1.is_zero());
    }
}
