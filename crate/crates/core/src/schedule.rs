//! Fixed-step output schedules.

use crate::error::{Error, Result};

/// Map output times onto step indices of a fixed step `dt`.
///
/// Every time must be a non-negative multiple of `dt` (to `1e-9` relative);
/// times must be strictly increasing.
pub fn output_steps(times: &[f64], dt: f64) -> Result<Vec<u64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let mut steps = Vec::with_capacity(times.len());
    let mut last: Option<f64> = None;
    for &t in times {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("output time {t} is invalid")));
        }
        if last.is_some_and(|l| t <= l) {
            return Err(Error::InvalidParameter("output times must be strictly increasing".into()));
        }
        let k = (t / dt).round();
        if (k * dt - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::InvalidParameter(format!("output time {t} is not a multiple of dt = {dt}")));
        }
        steps.push(k as u64);
        last = Some(t);
    }
    Ok(steps)
}

/// `count + 1` equally spaced times on `[0, t_end]`.
pub fn uniform_times(t_end: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|i| t_end * i as f64 / count as f64).collect()
}

/// Times `0` and `(1 + t)` geometrically spaced up to `t_end`, rounded to multiples of `dt`.
pub fn log_times(t_end: f64, per_decade: usize, dt: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    let decades = (1.0 + t_end).log10();
    let count = (decades * per_decade as f64).ceil() as usize;
    for i in 1..=count {
        let s = 10f64.powf(decades * i as f64 / count as f64) - 1.0;
        let t = (s / dt).round() * dt;
        if t > *out.last().unwrap() && t <= t_end + 1e-9 {
            out.push(t);
        }
    }
    out
}
