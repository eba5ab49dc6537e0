//! Pseudo-spectral evaluation of the projected advective terms.
//!
//! For solenoidal `u` and `w` the three advective terms combine into a
//! divergence, `(u.grad)u + tau (w.grad)u + tau (u.grad)w = div S` with the
//! symmetric tensor `S_ij = u_i u_j + tau (u_i w_j + w_i u_j)`. Only three
//! products are formed in physical space, so one step of the hyperbolic
//! system costs two inverse and two forward transforms.

use num_complex::Complex;

use super::field::{forward_real, inverse_real, SpectralField};
use super::ops::{derivative_symbol, leray_in_place, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Spectral energy fraction above the 2/3 cutoff that raises the aliasing flag.
pub const ALIASING_GUARD: f64 = 1e-3;

/// Result of [`nonlinearity_checked`].
#[derive(Clone, Debug)]
pub struct Nonlinearity<T: Real> {
    /// `-P[(u.grad)u + tau (w.grad)u + tau (u.grad)w]`, solenoidal.
    pub value: SpectralField<T>,
    /// Maximum of `|u|` over the grid, for CFL checks.
    pub max_speed: T,
    /// Set when an input carried more than [`ALIASING_GUARD`] of its energy above the cutoff.
    pub aliasing_warning: bool,
}

pub(crate) struct Flux<T: Real> {
    /// `-div S`, dealiased but not projected.
    pub value: SpectralField<T>,
    pub max_speed: T,
    pub aliased: bool,
}

/// `-P[(u.grad)u + tau (w.grad)u + tau (u.grad)w]`.
pub fn nonlinearity<T: Real>(u: &SpectralField<T>, w: &SpectralField<T>, tau: T) -> Result<SpectralField<T>> {
    nonlinearity_checked(u, w, tau).map(|n| n.value)
}

/// Like [`nonlinearity`], also reporting the aliasing guard and `max |u|`.
pub fn nonlinearity_checked<T: Real>(u: &SpectralField<T>, w: &SpectralField<T>, tau: T) -> Result<Nonlinearity<T>> {
    for f in [u, w] {
        f.require_components(2)?;
        if !f.is_solenoidal() {
            return Err(Error::NotSolenoidal(f.divergence_defect().to_f64_lossy()));
        }
    }
    u.require_same_grid(w)?;
    let Flux { mut value, max_speed, aliased } = advective_flux(u, Some(w), tau);
    leray_in_place(&mut value);
    if aliased {
        log::warn!("nonlinearity input exceeds the aliasing guard");
    }
    Ok(Nonlinearity { value, max_speed, aliasing_warning: aliased })
}

pub(crate) fn advective_flux<T: Real>(u: &SpectralField<T>, w: Option<&SpectralField<T>>, tau: T) -> Flux<T> {
    let grid = u.grid();
    let guard = T::lit(ALIASING_GUARD);
    let w = w.filter(|w| tau != T::zero() && !w.is_zero());
    let mut aliased = u.aliasing_fraction() > guard;
    let ud = u.dealiased();
    let mut arrays: Vec<&[Complex<T>]> = vec![ud.component(0), ud.component(1)];
    let wd = w.map(|w| {
        aliased |= w.aliasing_fraction() > guard;
        w.dealiased()
    });
    if let Some(wd) = &wd {
        arrays.push(wd.component(0));
        arrays.push(wd.component(1));
    }
    let phys = inverse_real(grid, &arrays);
    let n = grid.len();
    let (u1, u2) = (&phys[0], &phys[1]);
    let mut s11 = vec![T::zero(); n];
    let mut s12 = vec![T::zero(); n];
    let mut s22 = vec![T::zero(); n];
    let mut speed2 = T::zero();
    for i in 0..n {
        let (a, b) = (u1[i], u2[i]);
        speed2 = speed2.max(a * a + b * b);
        s11[i] = a * a;
        s12[i] = a * b;
        s22[i] = b * b;
    }
    if wd.is_some() {
        let (w1, w2) = (&phys[2], &phys[3]);
        let two_tau = tau + tau;
        for i in 0..n {
            s11[i] = s11[i] + two_tau * w1[i] * u1[i];
            s12[i] = s12[i] + tau * (w1[i] * u2[i] + u1[i] * w2[i]);
            s22[i] = s22[i] + two_tau * w2[i] * u2[i];
        }
    }
    let s = forward_real(grid, &[&s11, &s12, &s22]);
    let dx = derivative_symbol(u, MultiIndex(1, 0));
    let dy = derivative_symbol(u, MultiIndex(0, 1));
    let keep = grid.dealias_mask();
    let zero = Complex::new(T::zero(), T::zero());
    let mut n1 = vec![zero; n];
    let mut n2 = vec![zero; n];
    for i in 0..n {
        if keep[i] {
            n1[i] = -(dx[i] * s[0][i] + dy[i] * s[1][i]);
            n2[i] = -(dx[i] * s[1][i] + dy[i] * s[2][i]);
        }
    }
    let value = SpectralField::from_coefficients(grid, vec![n1, n2]).unwrap_or_else(|_| {
        // non-finite products; hand the caller a non-finite field to detect
        let nan = Complex::new(T::nan(), T::nan());
        SpectralField::from_coefficients_unchecked(grid, vec![vec![nan; n], vec![nan; n]])
    });
    Flux { value, max_speed: speed2.sqrt(), aliased }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use crate::spectral::ops::leray_project;
    use std::f64::consts::PI;

    fn tg(g: &Grid<f64>) -> SpectralField<f64> {
        SpectralField::from_fn_vector(g, |x, y| (x.sin() * y.cos(), -x.cos() * y.sin())).mark_solenoidal().unwrap()
    }

    #[test]
    fn zero_velocity_gives_zero() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let u = SpectralField::zeros(&g, 2);
        let w = tg(&g);
        assert!(nonlinearity(&u, &w, 0.3).unwrap().coefficient_norm() == 0.0);
    }

    #[test]
    fn taylor_green_advection_is_a_gradient() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let u = tg(&g);
        let z = SpectralField::zeros(&g, 2);
        let n = nonlinearity(&u, &z, 0.0).unwrap();
        assert!(n.coefficient_norm() < 1e-10);
        // unprojected flux is -grad(q) with q = -(cos 2x + cos 2y)/4
        let flux = advective_flux(&u, None, 0.0).value;
        let expect = SpectralField::from_fn_vector(&g, |x, y| (-(2.0 * x).sin() / 2.0, -(2.0 * y).sin() / 2.0));
        assert!((&flux - &expect).coefficient_norm() < 1e-12);
    }

    #[test]
    fn shear_mode_is_steady() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let u = SpectralField::from_fn_vector(&g, |x, _| (0.0, x.sin())).mark_solenoidal().unwrap();
        let n = nonlinearity(&u, &SpectralField::zeros(&g, 2), 0.7).unwrap();
        assert!(n.coefficient_norm() < 1e-14);
    }

    #[test]
    fn rejects_unflagged_input() {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        let u = SpectralField::from_fn_vector(&g, |x, _| (x.sin(), 0.0));
        assert!(nonlinearity(&u, &SpectralField::zeros(&g, 2), 0.0).is_err());
    }

    #[test]
    fn matches_direct_product_rule() {
        // compare against (u.grad)u + tau (w.grad)u + tau (u.grad)w formed term by term
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let u = leray_project(&SpectralField::from_fn_vector(&g, |x, y| ((2.0 * y).sin() + x.cos() * 0.3, (x + y).cos()))).unwrap();
        let w = leray_project(&SpectralField::from_fn_vector(&g, |x, y| (y.cos(), (2.0 * x - y).sin()))).unwrap();
        let tau = 0.4;
        let got = nonlinearity(&u, &w, tau).unwrap();
        let pu = u.to_physical();
        let pw = w.to_physical();
        let grad = |f: &SpectralField<f64>| crate::spectral::ops::gradient(f).to_physical();
        let (gu, gw) = (grad(&u), grad(&w));
        let mut out = vec![vec![0.0; g.len()]; 2];
        for i in 0..g.len() {
            for c in 0..2 {
                let du = (gu[2 * c][i], gu[2 * c + 1][i]);
                let dw = (gw[2 * c][i], gw[2 * c + 1][i]);
                let adv = pu[0][i] * du.0 + pu[1][i] * du.1;
                let wu = pw[0][i] * du.0 + pw[1][i] * du.1;
                let uw = pu[0][i] * dw.0 + pu[1][i] * dw.1;
                out[c][i] = -(adv + tau * (wu + uw));
            }
        }
        let direct = leray_project(&SpectralField::from_physical(&g, &out).unwrap()).unwrap();
        assert!((&got - &direct).coefficient_norm() < 1e-12);
        assert!(got.divergence_defect() < 1e-12);
    }
}
