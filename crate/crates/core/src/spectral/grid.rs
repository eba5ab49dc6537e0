use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform periodic grid on `[0, L)^2` with `n` points per axis.
///
/// Physical samples are stored row-major with `y` outer (`iy * n + ix`);
/// Fourier coefficients are stored row-major with `k_x` outer
/// (`ix * n + iy`, FFT frequency order along each axis). Coefficients are
/// normalised so that `f(x) = sum_k c_k exp(i k.x)`.
#[derive(Clone)]
pub struct Grid<T: Real> {
    inner: Arc<GridInner<T>>,
}

struct GridInner<T: Real> {
    n: usize,
    length: T,
    kx: Vec<T>,
    ky: Vec<T>,
    k2: Vec<T>,
    lattice: Vec<u32>,
    neg: Vec<usize>,
    keep: Vec<bool>,
    nyq_x: Vec<bool>,
    nyq_y: Vec<bool>,
    fft: Arc<dyn Fft<T>>,
    ifft: Arc<dyn Fft<T>>,
}

impl<T: Real> Grid<T> {
    pub fn new(n: usize, length: T) -> Result<Self> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("points per axis must be even and >= 16, got {n}")));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!("box length must be positive, got {length}")));
        }
        let unit = T::lit(2.0) * T::PI() / length;
        let total = n * n;
        let mut kx = Vec::with_capacity(total);
        let mut ky = Vec::with_capacity(total);
        let mut k2 = Vec::with_capacity(total);
        let mut lattice = Vec::with_capacity(total);
        let mut neg = Vec::with_capacity(total);
        let mut keep = Vec::with_capacity(total);
        let mut nyq_x = Vec::with_capacity(total);
        let mut nyq_y = Vec::with_capacity(total);
        for ix in 0..n {
            let fx = signed_freq(ix, n);
            for iy in 0..n {
                let fy = signed_freq(iy, n);
                let (ax, ay) = (T::from_i64(fx).unwrap() * unit, T::from_i64(fy).unwrap() * unit);
                kx.push(ax);
                ky.push(ay);
                k2.push(ax * ax + ay * ay);
                lattice.push((fx * fx + fy * fy) as u32);
                neg.push(((n - ix) % n) * n + (n - iy) % n);
                keep.push(3 * (fx.unsigned_abs() as usize) < n && 3 * (fy.unsigned_abs() as usize) < n);
                nyq_x.push(ix == n / 2);
                nyq_y.push(iy == n / 2);
            }
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        Ok(Self { inner: Arc::new(GridInner { n, length, kx, ky, k2, lattice, neg, keep, nyq_x, nyq_y, fft, ifft }) })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn len(&self) -> usize {
        self.inner.n * self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> T {
        self.inner.length
    }

    pub fn dx(&self) -> T {
        self.inner.length / T::from_count(self.inner.n)
    }

    /// Cell area used by grid quadrature.
    pub fn cell_area(&self) -> T {
        self.dx() * self.dx()
    }

    pub fn area(&self) -> T {
        self.inner.length * self.inner.length
    }

    /// Smallest non-zero wavenumber `2 pi / L`.
    pub fn wavenumber_unit(&self) -> T {
        T::lit(2.0) * T::PI() / self.inner.length
    }

    pub fn kx(&self) -> &[T] {
        &self.inner.kx
    }

    pub fn ky(&self) -> &[T] {
        &self.inner.ky
    }

    /// `|k|^2` per mode.
    pub fn k2(&self) -> &[T] {
        &self.inner.k2
    }

    /// Integer lattice radius `fx^2 + fy^2` per mode; modes sharing it share `|k|`.
    pub fn lattice_radius2(&self) -> &[u32] {
        &self.inner.lattice
    }

    /// Index of the mode `-k`.
    pub fn neg_index(&self) -> &[usize] {
        &self.inner.neg
    }

    /// 2/3-rule mask: `true` for retained modes (`3|f| < n` on both axes).
    pub fn dealias_mask(&self) -> &[bool] {
        &self.inner.keep
    }

    pub fn is_nyquist_x(&self, idx: usize) -> bool {
        self.inner.nyq_x[idx]
    }

    pub fn is_nyquist_y(&self, idx: usize) -> bool {
        self.inner.nyq_y[idx]
    }

    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.inner.nyq_x[idx] || self.inner.nyq_y[idx]
    }

    /// Signed integer frequencies of a spectral index.
    pub fn frequencies(&self, idx: usize) -> (i64, i64) {
        let n = self.inner.n;
        (signed_freq(idx / n, n), signed_freq(idx % n, n))
    }

    /// Spectral index of the signed frequency pair.
    pub fn index_of(&self, fx: i64, fy: i64) -> usize {
        let n = self.inner.n as i64;
        (fx.rem_euclid(n) * n + fy.rem_euclid(n)) as usize
    }

    /// Physical coordinates of sample `iy * n + ix`.
    pub fn coordinates(&self, idx: usize) -> (T, T) {
        let n = self.inner.n;
        (T::from_count(idx % n) * self.dx(), T::from_count(idx / n) * self.dx())
    }

    /// Physical samples (y-major) to normalised Fourier coefficients (kx-major).
    pub fn forward(&self, data: &mut Vec<Complex<T>>) {
        self.transform(data, &self.inner.fft);
        let scale = T::one() / T::from_count(self.len());
        for c in data.iter_mut() {
            *c = *c * scale;
        }
    }

    /// Fourier coefficients (kx-major) to physical samples (y-major).
    pub fn inverse(&self, data: &mut Vec<Complex<T>>) {
        self.transform(data, &self.inner.ifft);
    }

    fn transform(&self, data: &mut Vec<Complex<T>>, plan: &Arc<dyn Fft<T>>) {
        let n = self.inner.n;
        debug_assert_eq!(data.len(), n * n);
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        let mut t = vec![Complex::new(T::zero(), T::zero()); n * n];
        transpose(data, &mut t, n);
        plan.process_with_scratch(&mut t, &mut scratch);
        *data = t;
    }
}

impl<T: Real> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.inner.n == other.inner.n && self.inner.length == other.inner.length)
    }
}

impl<T: Real> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.inner.n).field("length", &self.inner.length).finish()
    }
}

fn signed_freq(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn transpose<C: Copy>(src: &[C], dst: &mut [C], n: usize) {
    const B: usize = 32;
    for ib in (0..n).step_by(B) {
        for jb in (0..n).step_by(B) {
            for i in ib..(ib + B).min(n) {
                for j in jb..(jb + B).min(n) {
                    dst[j * n + i] = src[i * n + j];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::<f64>::new(15, 1.0).is_err());
        assert!(Grid::<f64>::new(8, 1.0).is_err());
        assert!(Grid::<f64>::new(17, 1.0).is_err());
        assert!(Grid::<f64>::new(16, 0.0).is_err());
        assert!(Grid::<f64>::new(16, f64::NAN).is_err());
    }

    #[test]
    fn frequency_layout() {
        let g = Grid::<f64>::new(16, 2.0 * std::f64::consts::PI).unwrap();
        let idx = g.index_of(3, -2);
        assert_eq!(g.frequencies(idx), (3, -2));
        assert!((g.kx()[idx] - 3.0).abs() < 1e-14 && (g.ky()[idx] + 2.0).abs() < 1e-14);
        assert_eq!(g.neg_index()[idx], g.index_of(-3, 2));
        assert_eq!(g.lattice_radius2()[idx], 13);
        assert!(g.is_nyquist_x(g.index_of(-8, 1)));
        // 3|f| < 16 keeps |f| <= 5
        assert!(g.dealias_mask()[g.index_of(5, -5)]);
        assert!(!g.dealias_mask()[g.index_of(6, 0)]);
    }
}
