//! Norms on spectral fields: Sobolev (Parseval) and Lebesgue (grid quadrature).

use num_complex::Complex;

use super::field::{inverse_real, SpectralField};
use super::ops::{derivative_symbol, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Lebesgue exponent `p` in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> Exponent<T> {
    pub fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !(p >= T::one()) || !p.is_finite() => {
                Err(Error::InvalidParameter(format!("Lebesgue exponent must be >= 1, got {p}")))
            }
            e => Ok(e),
        }
    }

    /// Hoelder conjugate `q / (q - 1)`.
    pub fn conjugate(self) -> Self {
        match self {
            Exponent::Infinity => Exponent::Finite(T::one()),
            Exponent::Finite(p) if p == T::one() => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - T::one())),
        }
    }
}

fn require_finite<T: Real>(f: &SpectralField<T>) -> Result<()> {
    if f.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("field coefficients"))
    }
}

/// Per-mode weight `sum_{|alpha| <= m} |k^alpha|^2`, consistent with [`derivative`](super::ops::derivative).
fn sobolev_weights<T: Real>(f: &SpectralField<T>, m: u32) -> Vec<T> {
    let grid = f.grid();
    let (kx, ky) = (grid.kx(), grid.ky());
    let alphas = MultiIndex::up_to(m);
    (0..grid.len())
        .map(|i| {
            let (x2, y2) = (kx[i] * kx[i], ky[i] * ky[i]);
            alphas.iter().fold(T::zero(), |acc, a| {
                if (a.0 % 2 == 1 && grid.is_nyquist_x(i)) || (a.1 % 2 == 1 && grid.is_nyquist_y(i)) {
                    acc
                } else {
                    acc + x2.powi(a.0 as i32) * y2.powi(a.1 as i32)
                }
            })
        })
        .collect()
}

/// `||f||_{m,2} = (sum_{|alpha|<=m} ||d^alpha f||_2^2)^(1/2)`, summed over components.
pub fn sobolev_norm<T: Real>(f: &SpectralField<T>, m: u32) -> Result<T> {
    require_finite(f)?;
    let w = sobolev_weights(f, m);
    let s = f
        .components()
        .iter()
        .map(|c| c.iter().zip(&w).fold(T::zero(), |acc, (v, &wi)| acc + v.norm_sqr() * wi))
        .fold(T::zero(), |a, b| a + b);
    Ok((s * f.grid().area()).sqrt())
}

/// `||grad f||_{m,2}`: Sobolev norm of the full gradient tensor.
pub fn gradient_sobolev_norm<T: Real>(f: &SpectralField<T>, m: u32) -> Result<T> {
    require_finite(f)?;
    let dx = derivative_symbol(f, MultiIndex(1, 0));
    let dy = derivative_symbol(f, MultiIndex(0, 1));
    let w = sobolev_weights(f, m);
    let mut s = T::zero();
    for c in f.components() {
        for i in 0..c.len() {
            s = s + (dx[i].norm_sqr() + dy[i].norm_sqr()) * c[i].norm_sqr() * w[i];
        }
    }
    Ok((s * f.grid().area()).sqrt())
}

/// Grid-quadrature `L^p` norm of physical samples with pointwise Euclidean modulus.
pub fn lp_of_samples<T: Real>(samples: &[Vec<T>], p: Exponent<T>, cell_area: T) -> T {
    let len = samples[0].len();
    let modulus = |i: usize| samples.iter().fold(T::zero(), |a, s| a + s[i] * s[i]).sqrt();
    match p {
        Exponent::Infinity => (0..len).map(modulus).fold(T::zero(), T::max),
        Exponent::Finite(p) if p == T::lit(2.0) => {
            let s = (0..len).fold(T::zero(), |a, i| a + samples.iter().fold(T::zero(), |b, s| b + s[i] * s[i]));
            (s * cell_area).sqrt()
        }
        Exponent::Finite(p) => {
            let s = (0..len).fold(T::zero(), |a, i| a + modulus(i).powf(p));
            (s * cell_area).powf(T::one() / p)
        }
    }
}

/// Trapezoidal grid quadrature of `|f|^p` (max modulus for `p = inf`).
pub fn lebesgue_norm<T: Real>(f: &SpectralField<T>, p: Exponent<T>) -> Result<T> {
    let p = p.validate()?;
    require_finite(f)?;
    Ok(lp_of_samples(&f.to_physical(), p, f.grid().cell_area()))
}

/// Max pointwise modulus on the grid.
pub fn sup_norm<T: Real>(f: &SpectralField<T>) -> T {
    lp_of_samples(&f.to_physical(), Exponent::Infinity, f.grid().cell_area())
}

fn derivative_samples<T: Real>(f: &SpectralField<T>, alpha: MultiIndex, with_gradient: bool) -> Vec<Vec<T>> {
    let sym = derivative_symbol(f, alpha);
    let mut arrays: Vec<Vec<Complex<T>>> = Vec::new();
    let mut push = |extra: Option<&[Complex<T>]>| {
        for c in f.components() {
            arrays.push(
                (0..c.len())
                    .map(|i| {
                        let s = match extra {
                            Some(e) => sym[i] * e[i],
                            None => sym[i],
                        };
                        s * c[i]
                    })
                    .collect(),
            );
        }
    };
    if with_gradient {
        let dx = derivative_symbol(f, MultiIndex(1, 0));
        let dy = derivative_symbol(f, MultiIndex(0, 1));
        push(Some(&dx));
        push(Some(&dy));
    } else {
        push(None);
    }
    let refs: Vec<&[Complex<T>]> = arrays.iter().map(|a| a.as_slice()).collect();
    inverse_real(f.grid(), &refs)
}

/// `||f||_{m,p} = sum_{|alpha|<=m} ||d^alpha f||_p` (sum-of-norms convention).
pub fn sobolev_lebesgue_norm<T: Real>(f: &SpectralField<T>, m: u32, p: Exponent<T>) -> Result<T> {
    let p = p.validate()?;
    require_finite(f)?;
    let area = f.grid().cell_area();
    Ok(MultiIndex::up_to(m).into_iter().map(|a| lp_of_samples(&derivative_samples(f, a, false), p, area)).fold(T::zero(), |x, y| x + y))
}

/// `||grad f||_{m,p} = sum_{|alpha|<=m} ||d^alpha grad f||_p`, gradient tensor in Frobenius modulus.
pub fn gradient_sobolev_lebesgue_norm<T: Real>(f: &SpectralField<T>, m: u32, p: Exponent<T>) -> Result<T> {
    let p = p.validate()?;
    require_finite(f)?;
    let area = f.grid().cell_area();
    Ok(MultiIndex::up_to(m).into_iter().map(|a| lp_of_samples(&derivative_samples(f, a, true), p, area)).fold(T::zero(), |x, y| x + y))
}

/// Fraction of `sum |f|^2` carried by samples outside the central half of the box.
pub fn edge_fraction_of_samples<T: Real>(samples: &[Vec<T>], n: usize) -> T {
    let (lo, hi) = (n / 4, 3 * n / 4);
    let (mut edge, mut tot) = (T::zero(), T::zero());
    for i in 0..n * n {
        let (ix, iy) = (i % n, i / n);
        let e = samples.iter().fold(T::zero(), |a, s| a + s[i] * s[i]);
        tot = tot + e;
        if ix < lo || ix >= hi || iy < lo || iy >= hi {
            edge = edge + e;
        }
    }
    if tot == T::zero() {
        T::zero()
    } else {
        edge / tot
    }
}

/// Edge fraction of a field (box centred at `L/2`).
pub fn edge_fraction<T: Real>(f: &SpectralField<T>) -> T {
    edge_fraction_of_samples(&f.to_physical(), f.grid().n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use crate::spectral::ops::derivative;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid<f64> {
        Grid::new(n, 2.0 * PI).unwrap()
    }

    #[test]
    fn sobolev_examples() {
        let g = grid(32);
        assert_eq!(sobolev_norm(&SpectralField::zeros(&g, 2), 3).unwrap(), 0.0);
        let s = SpectralField::from_fn_scalar(&g, |x, _| x.sin());
        assert!((sobolev_norm(&s, 0).unwrap() - 2.0_f64.sqrt() * PI).abs() < 1e-12);
        assert!((sobolev_norm(&s, 1).unwrap() - 2.0 * PI).abs() < 1e-12);
        let mut prev = 0.0;
        for m in 0..5 {
            let v = sobolev_norm(&s, m).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn sobolev_matches_derivative_sum() {
        let g = grid(16);
        let f = SpectralField::from_fn_vector(&g, |x, y| ((2.0 * x).sin() * y.cos(), (x - 3.0 * y).cos()));
        let direct: f64 = MultiIndex::up_to(3).into_iter().map(|a| sobolev_norm(&derivative(&f, a), 0).unwrap().powi(2)).sum();
        assert!((sobolev_norm(&f, 3).unwrap() - direct.sqrt()).abs() < 1e-10 * direct.sqrt());
    }

    #[test]
    fn lebesgue_examples() {
        let g = grid(64);
        assert_eq!(lebesgue_norm(&SpectralField::zeros(&g, 1), Exponent::Finite(3.0)).unwrap(), 0.0);
        let s = SpectralField::from_fn_scalar(&g, |x, _| x.sin());
        assert!((lebesgue_norm(&s, Exponent::Finite(2.0)).unwrap() - 2.0_f64.sqrt() * PI).abs() < 1e-12);
        assert!((lebesgue_norm(&s, Exponent::Infinity).unwrap() - 1.0).abs() <= 1e-3);
        assert!(lebesgue_norm(&s, Exponent::Finite(0.5)).is_err());
    }

    #[test]
    fn conjugate_exponent() {
        assert_eq!(Exponent::Finite(8.0).conjugate(), Exponent::Finite(8.0 / 7.0));
        assert_eq!(Exponent::<f64>::Infinity.conjugate(), Exponent::Finite(1.0));
    }

    #[test]
    fn sum_convention_for_w1_inf() {
        let g = grid(64);
        let s = SpectralField::from_fn_scalar(&g, |x, _| x.sin());
        // |sin| + |cos| + 0
        let v = sobolev_lebesgue_norm(&s, 1, Exponent::Infinity).unwrap();
        assert!((v - 2.0).abs() < 2e-3);
    }
}
