use crate::hns::HnsState;
use crate::ns::{ns_time_derivative, NsState};
use crate::scalar::Real;
use crate::spectral::{gradient_sobolev_lebesgue_norm, gradient_sobolev_norm, sobolev_lebesgue_norm, sobolev_norm, Exponent};

fn sq<T: Real>(x: T) -> T {
    x * x
}

/// `E_m = 1/2 sum_{|alpha| <= m+1} (tau^2 ||d^alpha u_t||^2 + tau mu ||d^alpha grad u||^2 + eps2 ||d^alpha u||^2)`.
pub fn energy_em<T: Real>(state: &HnsState<T>, m: u32, eps2: T) -> T {
    let k = m + 1;
    let w = sq(sobolev_norm(&state.w, k).unwrap_or(T::nan()));
    let g = sq(gradient_sobolev_norm(&state.u, k).unwrap_or(T::nan()));
    let u = sq(sobolev_norm(&state.u, k).unwrap_or(T::nan()));
    let tau = state.tau;
    (tau * tau * w + tau * state.mu * g + eps2 * u) / T::lit(2.0)
}

/// `E_m(v) = 1/2 sum_{|alpha| <= m+1} (tau ||d^alpha v_t||^2 + mu ||d^alpha grad v||^2 + ||d^alpha v||^2)`
/// with `v_t` from the Navier-Stokes right-hand side.
pub fn energy_em_ns<T: Real>(state: &NsState<T>, m: u32, tau: T) -> T {
    energy_em_ns_with(state, &ns_time_derivative(state), m, tau)
}

pub(crate) fn energy_em_ns_with<T: Real>(state: &NsState<T>, vt: &crate::spectral::SpectralField<T>, m: u32, tau: T) -> T {
    let k = m + 1;
    let w = sq(sobolev_norm(vt, k).unwrap_or(T::nan()));
    let g = sq(gradient_sobolev_norm(&state.v, k).unwrap_or(T::nan()));
    let u = sq(sobolev_norm(&state.v, k).unwrap_or(T::nan()));
    (tau * w + state.mu * g + u) / T::lit(2.0)
}

/// Gronwall integrand `|u|_inf^2 + tau |u_t|_{1,inf} + |grad u|_inf + tau^2 |u_t|_{1,inf}^2 + |grad u|_inf^2`.
pub fn gronwall_integrand<T: Real>(state: &HnsState<T>) -> T {
    let inf = Exponent::Infinity;
    let u = sobolev_lebesgue_norm(&state.u, 0, inf).unwrap_or(T::nan());
    let gu = gradient_sobolev_lebesgue_norm(&state.u, 0, inf).unwrap_or(T::nan());
    let w1 = if state.w.is_zero() { T::zero() } else { sobolev_lebesgue_norm(&state.w, 1, inf).unwrap_or(T::nan()) };
    gronwall_from_norms(u, gu, w1, state.tau)
}

pub(crate) fn gronwall_from_norms<T: Real>(u_inf: T, grad_inf: T, ut_1inf: T, tau: T) -> T {
    u_inf * u_inf + tau * ut_1inf + grad_inf + tau * tau * ut_1inf * ut_1inf + grad_inf * grad_inf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, SpectralField};
    use std::f64::consts::PI;

    fn shear(g: &Grid<f64>) -> SpectralField<f64> {
        SpectralField::from_fn_vector(g, |x, _| (0.0, x.sin())).mark_solenoidal().unwrap()
    }

    #[test]
    fn energy_of_shear_mode() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let (tau, mu, eps2) = (0.3, 0.7, 0.2);
        let s = HnsState::new(shear(&g), SpectralField::zeros(&g, 2), 0.0, tau, mu).unwrap();
        let e = energy_em(&s, 0, eps2);
        assert!((e - 2.0 * PI * PI * (tau * mu + eps2)).abs() < 1e-12);
        let z = HnsState::new(SpectralField::zeros(&g, 2), SpectralField::zeros(&g, 2), 0.0, tau, mu).unwrap();
        assert_eq!(energy_em(&z, 3, eps2), 0.0);
        let scaled = HnsState::new(s.u.scaled(3.0), s.w.clone(), 0.0, tau, mu).unwrap();
        assert!((energy_em(&scaled, 0, eps2) - 9.0 * e).abs() < 1e-11);
    }

    #[test]
    fn gronwall_of_shear_mode() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        for s in [1.0, 2.0, 0.5] {
            let st = HnsState::new(shear(&g).scaled(s), SpectralField::zeros(&g, 2), 0.0, 0.4, 1.0).unwrap();
            let expect = 2.0 * s * s + s;
            assert!((gronwall_integrand(&st) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn ns_energy_of_taylor_green() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let u = SpectralField::from_fn_vector(&g, |x, y| (x.sin() * y.cos(), -x.cos() * y.sin())).mark_solenoidal().unwrap();
        let s = NsState::new(u, 0.0, 1.0).unwrap();
        // each |alpha| <= 1 term: ||v||^2 = 2 pi^2, ||dx v||^2 = ||dy v||^2 = 2 pi^2; grad terms twice that; v_t = -2 v
        let (base, tau) = (2.0 * PI * PI, 0.1);
        let sum_v = 3.0 * base;
        let sum_grad = 2.0 * base + 4.0 * base;
        let expect = 0.5 * (tau * 4.0 * sum_v + sum_grad + sum_v);
        assert!((energy_em_ns(&s, 0, tau) - expect).abs() < 1e-10);
    }
}
