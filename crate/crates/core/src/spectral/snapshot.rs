//! Binary field snapshots.
//!
//! Layout (all little-endian):
//!
//! | offset | size | content                              |
//! |-------:|-----:|--------------------------------------|
//! | 0      | 8    | magic `HNSSNAP1`                     |
//! | 8      | 4    | `u32` points per axis `n`            |
//! | 12     | 4    | `u32` number of components           |
//! | 16     | 8    | `f64` box length `L`                 |
//! | 24     | 8    | `f64` time                           |
//! | 32     | 4    | `u32` flags, bit 0 = solenoidal      |
//! | 36     | 4    | `u32` reserved, zero                 |
//! | 40     |      | coefficients                         |
//!
//! Coefficients are complex64 (`f32` real part, then `f32` imaginary part),
//! component by component, each component in row-major order with the
//! x-frequency index as the row: entry `ix * n + iy` holds the mode
//! `(fx, fy)` with `fx = ix` for `ix < n/2` and `ix - n` otherwise (same for y).

use std::io::{Read, Write};

use num_complex::Complex;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"HNSSNAP1";
pub const SNAPSHOT_HEADER_LEN: usize = 40;
const FLAG_SOLENOIDAL: u32 = 1;

/// A decoded snapshot.
#[derive(Clone, Debug)]
pub struct Snapshot<T: Real> {
    pub field: SpectralField<T>,
    pub time: f64,
}

fn io_err(e: std::io::Error) -> Error {
    Error::Snapshot(e.to_string())
}

pub fn write_snapshot<T: Real, W: Write>(mut out: W, field: &SpectralField<T>, time: f64) -> Result<()> {
    let grid = field.grid();
    let mut buf = Vec::with_capacity(SNAPSHOT_HEADER_LEN + 8 * grid.len() * field.n_components());
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    buf.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    buf.extend_from_slice(&(field.n_components() as u32).to_le_bytes());
    buf.extend_from_slice(&grid.length().to_f64_lossy().to_le_bytes());
    buf.extend_from_slice(&time.to_le_bytes());
    let flags = if field.is_solenoidal() { FLAG_SOLENOIDAL } else { 0 };
    buf.extend_from_slice(&flags.to_le_bytes());
    buf.extend_from_slice(&0u32.to_le_bytes());
    for c in field.components() {
        for v in c {
            buf.extend_from_slice(&(v.re.to_f32().unwrap_or(f32::NAN)).to_le_bytes());
            buf.extend_from_slice(&(v.im.to_f32().unwrap_or(f32::NAN)).to_le_bytes());
        }
    }
    out.write_all(&buf).map_err(io_err)
}

pub fn read_snapshot<T: Real, R: Read>(mut input: R) -> Result<Snapshot<T>> {
    let mut head = [0u8; SNAPSHOT_HEADER_LEN];
    input.read_exact(&mut head).map_err(io_err)?;
    if &head[0..8] != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(head[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(head[o..o + 8].try_into().unwrap());
    let (n, ncomp, length, time, flags) = (u32_at(8) as usize, u32_at(12) as usize, f64_at(16), f64_at(24), u32_at(32));
    if !(1..=2).contains(&ncomp) {
        return Err(Error::Snapshot(format!("unsupported component count {ncomp}")));
    }
    let grid = Grid::new(n, T::lit(length))?;
    let mut body = vec![0u8; 8 * n * n * ncomp];
    input.read_exact(&mut body).map_err(io_err)?;
    let f32_at = |o: usize| T::lit(f32::from_le_bytes(body[o..o + 4].try_into().unwrap()) as f64);
    let comps = (0..ncomp)
        .map(|c| {
            (0..n * n)
                .map(|i| {
                    let o = 8 * (c * n * n + i);
                    Complex::new(f32_at(o), f32_at(o + 4))
                })
                .collect()
        })
        .collect();
    let field = SpectralField::from_coefficients(&grid, comps)?;
    // precision loss in complex64 may push the divergence defect above the strict tolerance
    let field = field.with_solenoidal(flags & FLAG_SOLENOIDAL != 0);
    Ok(Snapshot { field, time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn golden_header_and_first_mode() {
        let g = Grid::<f64>::new(16, 2.0 * PI).unwrap();
        let mut c = vec![Complex::new(0.0, 0.0); 256];
        c[g.index_of(1, 0)] = Complex::new(0.5, 0.0);
        c[g.index_of(-1, 0)] = Complex::new(0.5, 0.0);
        let f = SpectralField::from_coefficients(&g, vec![c]).unwrap();
        let mut bytes = Vec::new();
        write_snapshot(&mut bytes, &f, 1.5).unwrap();
        assert_eq!(bytes.len(), 40 + 8 * 256);
        let mut expect = b"HNSSNAP1".to_vec();
        expect.extend([16, 0, 0, 0, 1, 0, 0, 0]);
        expect.extend([0x18, 0x2d, 0x44, 0x54, 0xfb, 0x21, 0x19, 0x40]);
        expect.extend([0, 0, 0, 0, 0, 0, 0xf8, 0x3f]);
        expect.extend([0; 8]);
        assert_eq!(&bytes[..40], &expect[..]);
        // cos x = (e^{ix} + e^{-ix}) / 2: the (fx=1, fy=0) entry sits at index 1 * 16 + 0
        let o = 40 + 8 * 16;
        assert_eq!(&bytes[o..o + 8], &[0, 0, 0, 0x3f, 0, 0, 0, 0]);
    }

    #[test]
    fn roundtrip_preserves_values_to_single_precision() {
        let g = Grid::<f64>::new(16, 10.0).unwrap();
        let u = SpectralField::from_fn_vector(&g, |x, y| ((0.6 * y).sin(), (1.2 * x).cos()));
        let u = crate::spectral::ops::leray_project(&u).unwrap();
        let mut bytes = Vec::new();
        write_snapshot(&mut bytes, &u, 0.25).unwrap();
        let s: Snapshot<f64> = read_snapshot(&bytes[..]).unwrap();
        assert_eq!(s.time, 0.25);
        assert!(s.field.is_solenoidal());
        assert!((&s.field - &u).coefficient_norm() < 1e-7 * u.coefficient_norm());
    }

    #[test]
    fn rejects_bad_magic() {
        let bytes = [0u8; 64];
        assert!(read_snapshot::<f64, _>(&bytes[..]).is_err());
    }
}
