//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real floating-point scalar usable by the spectral kernels.
///
/// Implemented for `f32` and `f64`. All solver tolerances quoted in the
/// documentation assume `f64`; `f32` is supported for cheap exploratory runs.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Display + LowerExp + Debug {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from an index or count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Display + LowerExp + Debug {}

/// `sinh(x)/x`, accurate near zero.
pub fn shc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(0.5) {
        even_series(x * x, |n| ((2 * n + 2) * (2 * n + 3)) as f64)
    } else {
        x.sinh() / x
    }
}

/// `sin(x)/x`, accurate near zero.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(0.5) {
        even_series(-(x * x), |n| ((2 * n + 2) * (2 * n + 3)) as f64)
    } else {
        x.sin() / x
    }
}

// 1 + y/d0 + y^2/(d0 d1) + ... with term ratio y/d(n); converges fast for |y| < 1/4.
fn even_series<T: Real>(y: T, denom: impl Fn(usize) -> f64) -> T {
    let mut term = T::one();
    let mut sum = T::one();
    for n in 0..12 {
        term = term * y / T::lit(denom(n));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    sum
}

/// `phi_1(z) = (e^z - 1)/z` for real `z`.
pub fn phi1<T: Real>(z: T) -> T {
    if z.abs() < T::lit(1e-3) {
        T::one() + z / T::lit(2.0) + z * z / T::lit(6.0) + z * z * z / T::lit(24.0)
    } else {
        z.exp_m1() / z
    }
}

/// `phi_2(z) = (e^z - 1 - z)/z^2` for real `z`.
pub fn phi2<T: Real>(z: T) -> T {
    if z.abs() < T::lit(0.2) {
        // sum_{i>=0} z^i/(i+2)!
        let mut term = T::lit(0.5);
        let mut sum = term;
        for i in 1..16 {
            term = term * z / T::from_count(i + 2);
            sum = sum + term;
        }
        sum
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_branches_match_closed_forms() {
        for &x in &[1e-8, 1e-3, 0.1, 0.49, 0.51, 2.0] {
            let x: f64 = x;
            assert!((shc(x) - x.sinh() / x).abs() < 1e-15 * shc(x).abs().max(1.0) * 4.0);
            assert!((sinc(x) - x.sin() / x).abs() < 4e-15);
        }
        assert_eq!(shc(0.0_f64), 1.0);
        assert_eq!(sinc(0.0_f64), 1.0);
    }

    #[test]
    fn phi_functions_continuous_across_branches() {
        for &z in &[-1e-3, -0.2, -0.1999, -5.0, 1e-4, 0.19] {
            let z: f64 = z;
            let direct1 = if z == 0.0 { 1.0 } else { z.exp_m1() / z };
            assert!((phi1(z) - direct1).abs() < 1e-12);
            let direct2 = (z.exp_m1() - z) / (z * z);
            // direct formula loses digits for small |z|; compare loosely there
            let tol = if z.abs() < 0.01 { 1e-6 } else { 1e-12 };
            assert!((phi2(z) - direct2).abs() < tol, "z={z}");
        }
        assert!((phi1(0.0_f64) - 1.0).abs() < 1e-16);
        assert!((phi2(0.0_f64) - 0.5).abs() < 1e-16);
    }
}
