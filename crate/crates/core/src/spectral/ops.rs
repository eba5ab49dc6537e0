//! Fourier-multiplier operators: projection, derivatives, curl.

use num_complex::Complex;

use super::field::SpectralField;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Partial-derivative multi-index `(a, b)` for `d^a/dx^a d^b/dy^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub u32, pub u32);

impl MultiIndex {
    pub const ZERO: Self = Self(0, 0);

    pub fn order(self) -> u32 {
        self.0 + self.1
    }

    /// All multi-indices with `|alpha| <= max_order`, ordered by total order.
    pub fn up_to(max_order: u32) -> Vec<Self> {
        (0..=max_order).flat_map(|o| (0..=o).map(move |a| Self(o - a, a))).collect()
    }
}

/// Physical samples and back; rejects non-finite coefficients.
pub fn transform_roundtrip<T: Real>(f: &SpectralField<T>) -> Result<SpectralField<T>> {
    if !f.is_finite() {
        return Err(Error::NonFinite("field coefficients"));
    }
    let back = SpectralField::from_physical(f.grid(), &f.to_physical())?;
    Ok(back.with_solenoidal(f.is_solenoidal()))
}

/// Leray projection `I - k k^T / |k|^2` per mode.
///
/// The mean mode passes through unchanged; Nyquist-line modes are set to
/// zero because the projector is not Hermitian-compatible there.
pub fn leray_project<T: Real>(f: &SpectralField<T>) -> Result<SpectralField<T>> {
    f.require_components(2)?;
    let mut out = f.clone();
    leray_in_place(&mut out);
    Ok(out)
}

pub(crate) fn leray_in_place<T: Real>(f: &mut SpectralField<T>) {
    let grid = f.grid().clone();
    let (kx, ky, k2) = (grid.kx(), grid.ky(), grid.k2());
    let comps = f.components_mut();
    let (first, second) = comps.split_at_mut(1);
    let (a, b) = (&mut first[0], &mut second[0]);
    for i in 0..grid.len() {
        if i == 0 {
            continue;
        }
        if grid.is_nyquist(i) {
            a[i] = Complex::new(T::zero(), T::zero());
            b[i] = a[i];
            continue;
        }
        let d = (a[i] * kx[i] + b[i] * ky[i]) / k2[i];
        a[i] = a[i] - d * kx[i];
        b[i] = b[i] - d * ky[i];
    }
    f.set_solenoidal(true);
}

/// `(i k_x)^a (i k_y)^b` per mode; Nyquist lines are zeroed for odd orders.
pub fn derivative<T: Real>(f: &SpectralField<T>, alpha: MultiIndex) -> SpectralField<T> {
    if alpha == MultiIndex::ZERO {
        return f.clone();
    }
    let mut out = f.clone();
    let mult = derivative_symbol(f, alpha);
    for c in out.components_mut() {
        for (v, m) in c.iter_mut().zip(&mult) {
            *v = *v * *m;
        }
    }
    out
}

pub(crate) fn derivative_symbol<T: Real>(f: &SpectralField<T>, alpha: MultiIndex) -> Vec<Complex<T>> {
    let grid = f.grid();
    let (kx, ky) = (grid.kx(), grid.ky());
    (0..grid.len())
        .map(|i| {
            if (alpha.0 % 2 == 1 && grid.is_nyquist_x(i)) || (alpha.1 % 2 == 1 && grid.is_nyquist_y(i)) {
                return Complex::new(T::zero(), T::zero());
            }
            ipow(kx[i], alpha.0) * ipow(ky[i], alpha.1)
        })
        .collect()
}

fn ipow<T: Real>(k: T, p: u32) -> Complex<T> {
    let mag = k.powi(p as i32);
    match p % 4 {
        0 => Complex::new(mag, T::zero()),
        1 => Complex::new(T::zero(), mag),
        2 => Complex::new(-mag, T::zero()),
        _ => Complex::new(T::zero(), -mag),
    }
}

/// Component-wise gradient: for an `c`-component field returns `2c` components
/// ordered `d_x f_0, d_y f_0, d_x f_1, d_y f_1, ...`.
pub fn gradient<T: Real>(f: &SpectralField<T>) -> SpectralField<T> {
    let dx = derivative(f, MultiIndex(1, 0));
    let dy = derivative(f, MultiIndex(0, 1));
    let mut comps = Vec::with_capacity(2 * f.n_components());
    for (a, b) in dx.into_components().into_iter().zip(dy.into_components()) {
        comps.push(a);
        comps.push(b);
    }
    SpectralField::from_coefficients(f.grid(), comps).expect("gradient of a finite field")
}

/// Component-wise Laplacian `-|k|^2`.
pub fn laplacian<T: Real>(f: &SpectralField<T>) -> SpectralField<T> {
    let mut out = f.clone();
    let factor: Vec<T> = f.grid().k2().iter().map(|&k| -k).collect();
    out.apply_multiplier(&factor);
    out
}

/// Scalar curl `d_x u_y - d_y u_x` of a two-component field.
pub fn rot2d<T: Real>(u: &SpectralField<T>) -> Result<SpectralField<T>> {
    u.require_components(2)?;
    let dxv = derivative_symbol(u, MultiIndex(1, 0));
    let dyv = derivative_symbol(u, MultiIndex(0, 1));
    let c: Vec<Complex<T>> = (0..u.grid().len()).map(|i| dxv[i] * u.component(1)[i] - dyv[i] * u.component(0)[i]).collect();
    Ok(SpectralField::from_coefficients(u.grid(), vec![c]).expect("finite"))
}

/// Scalar divergence of a two-component field.
pub fn divergence<T: Real>(u: &SpectralField<T>) -> Result<SpectralField<T>> {
    u.require_components(2)?;
    let dxv = derivative_symbol(u, MultiIndex(1, 0));
    let dyv = derivative_symbol(u, MultiIndex(0, 1));
    let c: Vec<Complex<T>> = (0..u.grid().len()).map(|i| dxv[i] * u.component(0)[i] + dyv[i] * u.component(1)[i]).collect();
    Ok(SpectralField::from_coefficients(u.grid(), vec![c]).expect("finite"))
}

/// Velocity `(d_y psi, -d_x psi)` of a scalar stream function; solenoidal by construction.
pub fn perp_gradient<T: Real>(psi: &SpectralField<T>) -> Result<SpectralField<T>> {
    psi.require_components(1)?;
    let dxv = derivative_symbol(psi, MultiIndex(1, 0));
    let dyv = derivative_symbol(psi, MultiIndex(0, 1));
    let c = psi.component(0);
    let a: Vec<Complex<T>> = (0..c.len()).map(|i| dyv[i] * c[i]).collect();
    let b: Vec<Complex<T>> = (0..c.len()).map(|i| -dxv[i] * c[i]).collect();
    let mut u = SpectralField::from_coefficients(psi.grid(), vec![a, b])?;
    leray_in_place(&mut u);
    Ok(u)
}

/// Inverse of `-Laplacian` on mean-zero fields; the mean mode is set to zero.
pub fn inverse_neg_laplacian<T: Real>(f: &SpectralField<T>) -> SpectralField<T> {
    let mut out = f.clone();
    let factor: Vec<T> = f.grid().k2().iter().map(|&k| if k > T::zero() { T::one() / k } else { T::zero() }).collect();
    out.apply_multiplier(&factor);
    out
}

/// `L^2` inner product `int f . g dx` via Parseval.
pub fn inner_product<T: Real>(f: &SpectralField<T>, g: &SpectralField<T>) -> T {
    assert_eq!(f.n_components(), g.n_components());
    let mut acc = T::zero();
    for (a, b) in f.components().iter().zip(g.components()) {
        for (p, q) in a.iter().zip(b) {
            acc = acc + (p * q.conj()).re;
        }
    }
    acc * f.grid().area()
}
