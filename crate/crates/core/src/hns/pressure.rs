use num_complex::Complex;

use super::stepper::HnsState;
use crate::scalar::Real;
use crate::spectral::nonlinear::advective_flux;
use crate::spectral::SpectralField;

/// Combined pressure `q = p + tau p_t`, mean zero.
///
/// With `V = -(u.grad)u - tau (w.grad)u - tau (u.grad)w`, `grad q` is the
/// gradient part `(I - P) V`, so `q(k) = -i (k . V(k)) / |k|^2`.
pub fn pressure_reconstruct<T: Real>(state: &HnsState<T>) -> SpectralField<T> {
    let flux = advective_flux(&state.u, Some(&state.w), state.tau).value;
    let grid = state.grid();
    let (kx, ky, k2) = (grid.kx(), grid.ky(), grid.k2());
    let (a, b) = (flux.component(0), flux.component(1));
    let q: Vec<Complex<T>> = (0..grid.len())
        .map(|i| {
            if i == 0 || grid.is_nyquist(i) {
                return Complex::new(T::zero(), T::zero());
            }
            let d = (a[i] * kx[i] + b[i] * ky[i]) / k2[i];
            Complex::new(d.im, -d.re)
        })
        .collect();
    SpectralField::from_coefficients_unchecked(grid, vec![q])
}
