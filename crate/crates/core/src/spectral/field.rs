use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative divergence below which a vector field counts as solenoidal.
pub const SOLENOIDAL_TOLERANCE: f64 = 1e-10;

/// Fourier coefficients of a real scalar or vector field on a periodic box.
///
/// Each component holds `n * n` coefficients in the grid's spectral layout.
/// The `solenoidal` flag is set only by operations that guarantee
/// `k . u(k) = 0` per mode (Leray projection, and linear per-mode operators
/// applied to flagged fields).
#[derive(Clone, Debug)]
pub struct SpectralField<T: Real> {
    grid: Grid<T>,
    comps: Vec<Vec<Complex<T>>>,
    solenoidal: bool,
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(grid: &Grid<T>, components: usize) -> Self {
        assert!(components >= 1, "a field needs at least one component");
        Self {
            grid: grid.clone(),
            comps: vec![vec![Complex::new(T::zero(), T::zero()); grid.len()]; components],
            solenoidal: components == 2,
        }
    }

    pub fn from_coefficients(grid: &Grid<T>, comps: Vec<Vec<Complex<T>>>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::ComponentMismatch { expected: 1, found: 0 });
        }
        if comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::InvalidGrid("coefficient array length differs from n*n".into()));
        }
        let field = Self { grid: grid.clone(), comps, solenoidal: false };
        if !field.is_finite() {
            return Err(Error::NonFinite("coefficients"));
        }
        Ok(field)
    }

    pub(crate) fn from_coefficients_unchecked(grid: &Grid<T>, comps: Vec<Vec<Complex<T>>>) -> Self {
        Self { grid: grid.clone(), comps, solenoidal: false }
    }

    /// Transform physical samples (y-major, one array per component).
    pub fn from_physical(grid: &Grid<T>, samples: &[Vec<T>]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::ComponentMismatch { expected: 1, found: 0 });
        }
        if samples.iter().any(|s| s.len() != grid.len()) {
            return Err(Error::InvalidGrid("sample array length differs from n*n".into()));
        }
        if samples.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("physical samples"));
        }
        let refs: Vec<&[T]> = samples.iter().map(|s| s.as_slice()).collect();
        Ok(Self { grid: grid.clone(), comps: forward_real(grid, &refs), solenoidal: false })
    }

    /// Sample `f(x, y)` at the grid points.
    pub fn from_fn_scalar(grid: &Grid<T>, f: impl Fn(T, T) -> T) -> Self {
        let s: Vec<T> = (0..grid.len())
            .map(|i| {
                let (x, y) = grid.coordinates(i);
                f(x, y)
            })
            .collect();
        Self { grid: grid.clone(), comps: forward_real(grid, &[&s]), solenoidal: false }
    }

    pub fn from_fn_vector(grid: &Grid<T>, f: impl Fn(T, T) -> (T, T)) -> Self {
        let (mut a, mut b) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
        for i in 0..grid.len() {
            let (x, y) = grid.coordinates(i);
            let (u, v) = f(x, y);
            a.push(u);
            b.push(v);
        }
        Self { grid: grid.clone(), comps: forward_real(grid, &[&a, &b]), solenoidal: false }
    }

    /// Physical samples, one array per component (y-major).
    pub fn to_physical(&self) -> Vec<Vec<T>> {
        let refs: Vec<&[Complex<T>]> = self.comps.iter().map(|c| c.as_slice()).collect();
        inverse_real(&self.grid, &refs)
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn n_components(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &[Complex<T>] {
        &self.comps[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut [Complex<T>] {
        &mut self.comps[i]
    }

    pub fn components(&self) -> &[Vec<Complex<T>>] {
        &self.comps
    }

    pub(crate) fn components_mut(&mut self) -> &mut [Vec<Complex<T>>] {
        &mut self.comps
    }

    pub fn into_components(self) -> Vec<Vec<Complex<T>>> {
        self.comps
    }

    pub fn is_solenoidal(&self) -> bool {
        self.solenoidal
    }

    /// Verify `k . u(k) = 0` and set the solenoidal flag.
    pub fn mark_solenoidal(mut self) -> Result<Self> {
        self.require_components(2)?;
        let d = self.divergence_defect();
        if d > T::lit(SOLENOIDAL_TOLERANCE) {
            return Err(Error::NotSolenoidal(d.to_f64_lossy()));
        }
        self.solenoidal = true;
        Ok(self)
    }

    pub(crate) fn with_solenoidal(mut self, flag: bool) -> Self {
        self.solenoidal = flag && self.comps.len() == 2;
        self
    }

    pub(crate) fn set_solenoidal(&mut self, flag: bool) {
        self.solenoidal = flag && self.comps.len() == 2;
    }

    pub fn require_components(&self, expected: usize) -> Result<()> {
        if self.comps.len() != expected {
            return Err(Error::ComponentMismatch { expected, found: self.comps.len() });
        }
        Ok(())
    }

    pub fn require_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(|c| c.re == T::zero() && c.im == T::zero())
    }

    /// `||div u||_2 / ||grad u||_2` evaluated in Fourier space (0 for a constant field).
    pub fn divergence_defect(&self) -> T {
        if self.comps.len() != 2 {
            return T::zero();
        }
        let (kx, ky) = (self.grid.kx(), self.grid.ky());
        let (mut num, mut den) = (T::zero(), T::zero());
        for i in 0..self.grid.len() {
            let (a, b) = (self.comps[0][i], self.comps[1][i]);
            num = num + (a * kx[i] + b * ky[i]).norm_sqr();
            den = den + (a.norm_sqr() + b.norm_sqr()) * self.grid.k2()[i];
        }
        if den == T::zero() {
            T::zero()
        } else {
            (num / den).sqrt()
        }
    }

    /// `max |c(-k) - conj c(k)| / max |c|`; zero for coefficients of a real field.
    pub fn hermitian_defect(&self) -> T {
        let neg = self.grid.neg_index();
        let mut worst = T::zero();
        let mut scale = T::zero();
        for c in &self.comps {
            for i in 0..c.len() {
                worst = worst.max((c[neg[i]] - c[i].conj()).norm());
                scale = scale.max(c[i].norm());
            }
        }
        if scale == T::zero() {
            T::zero()
        } else {
            worst / scale
        }
    }

    /// Coefficient-space L2 norm, `sqrt(sum |c|^2)` over all components.
    pub fn coefficient_norm(&self) -> T {
        self.comps.iter().flatten().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt()
    }

    /// Copy with every mode outside the 2/3-rule band set to zero.
    pub fn dealiased(&self) -> Self {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    pub fn dealias_in_place(&mut self) {
        let keep = self.grid.dealias_mask();
        for c in &mut self.comps {
            for (v, &k) in c.iter_mut().zip(keep) {
                if !k {
                    *v = Complex::new(T::zero(), T::zero());
                }
            }
        }
    }

    /// Fraction of the coefficient energy outside the 2/3-rule band.
    pub fn aliasing_fraction(&self) -> T {
        let keep = self.grid.dealias_mask();
        let (mut hi, mut tot) = (T::zero(), T::zero());
        for c in &self.comps {
            for (v, &k) in c.iter().zip(keep) {
                let e = v.norm_sqr();
                tot = tot + e;
                if !k {
                    hi = hi + e;
                }
            }
        }
        if tot == T::zero() {
            T::zero()
        } else {
            hi / tot
        }
    }

    /// Mean (k = 0) coefficient of each component.
    pub fn mean(&self) -> Vec<Complex<T>> {
        self.comps.iter().map(|c| c[0]).collect()
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut out = self.clone();
        out.scale_in_place(s);
        out
    }

    pub fn scale_in_place(&mut self, s: T) {
        for v in self.comps.iter_mut().flatten() {
            *v = *v * s;
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: T, other: &Self) {
        self.assert_compatible(other);
        for (x, y) in self.comps.iter_mut().zip(&other.comps) {
            for (p, q) in x.iter_mut().zip(y) {
                *p = *p + *q * a;
            }
        }
        self.solenoidal = self.solenoidal && other.solenoidal;
    }

    /// Multiply every component by a real per-mode factor.
    pub fn apply_multiplier(&mut self, factor: &[T]) {
        for c in &mut self.comps {
            for (v, &f) in c.iter_mut().zip(factor) {
                *v = *v * f;
            }
        }
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(self.grid == other.grid, "fields live on different grids");
        assert_eq!(self.comps.len(), other.comps.len(), "component count differs");
    }
}

impl<T: Real> Add for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn add(self, rhs: Self) -> SpectralField<T> {
        let mut out = self.clone();
        out.axpy(T::one(), rhs);
        out
    }
}

impl<T: Real> Sub for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn sub(self, rhs: Self) -> SpectralField<T> {
        let mut out = self.clone();
        out.axpy(-T::one(), rhs);
        out
    }
}

impl<T: Real> Mul<T> for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn mul(self, rhs: T) -> SpectralField<T> {
        self.scaled(rhs)
    }
}

impl<T: Real> Neg for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn neg(self) -> SpectralField<T> {
        self.scaled(-T::one())
    }
}

/// Forward-transform real arrays, two per complex FFT.
pub(crate) fn forward_real<T: Real>(grid: &Grid<T>, arrays: &[&[T]]) -> Vec<Vec<Complex<T>>> {
    let neg = grid.neg_index();
    let half = T::lit(0.5);
    let mut out = Vec::with_capacity(arrays.len());
    for pair in arrays.chunks(2) {
        let mut buf: Vec<Complex<T>> = match pair {
            [a, b] => a.iter().zip(b.iter()).map(|(&x, &y)| Complex::new(x, y)).collect(),
            [a] => a.iter().map(|&x| Complex::new(x, T::zero())).collect(),
            _ => unreachable!(),
        };
        grid.forward(&mut buf);
        if pair.len() == 2 {
            let mut first = Vec::with_capacity(buf.len());
            let mut second = Vec::with_capacity(buf.len());
            for i in 0..buf.len() {
                let (z, zc) = (buf[i], buf[neg[i]].conj());
                first.push((z + zc) * half);
                let d = (z - zc) * half;
                // d / i
                second.push(Complex::new(d.im, -d.re));
            }
            out.push(first);
            out.push(second);
        } else {
            // enforce exact Hermitian symmetry of a real transform
            let sym: Vec<Complex<T>> = (0..buf.len()).map(|i| (buf[i] + buf[neg[i]].conj()) * half).collect();
            out.push(sym);
        }
    }
    out
}

/// Inverse-transform coefficient arrays to real samples, two per complex FFT.
pub(crate) fn inverse_real<T: Real>(grid: &Grid<T>, arrays: &[&[Complex<T>]]) -> Vec<Vec<T>> {
    let mut out = Vec::with_capacity(arrays.len());
    for pair in arrays.chunks(2) {
        let mut buf: Vec<Complex<T>> = match pair {
            [a, b] => a.iter().zip(b.iter()).map(|(&x, &y)| x + Complex::new(-y.im, y.re)).collect(),
            [a] => a.to_vec(),
            _ => unreachable!(),
        };
        grid.inverse(&mut buf);
        out.push(buf.iter().map(|c| c.re).collect());
        if pair.len() == 2 {
            out.push(buf.iter().map(|c| c.im).collect());
        }
    }
    out
}
