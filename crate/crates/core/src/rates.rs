//! Decay-exponent and convergence-order fits.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares power law `y ~ C (1 + t)^exponent` on a time window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    /// `log C`.
    pub intercept: f64,
    pub r2: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

/// Convergence order `e ~ C h^order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderFit {
    pub order: f64,
    pub intercept: f64,
    pub r2: f64,
    pub parameters: Vec<f64>,
    pub errors: Vec<f64>,
}

// slope, intercept, r^2 of y against x
fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let r2 = if syy > 0.0 { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) } else { 1.0 };
    (slope, my - slope * mx, r2)
}

/// Fit `log y` against `log(1 + t)` over the points with `t` in `[window.0, window.1]`.
pub fn fit_decay(t: &[f64], y: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    if t.len() != y.len() {
        return Err(Error::InvalidParameter("time and value series differ in length".into()));
    }
    let tol = 1e-12 * window.1.abs().max(1.0);
    let idx: Vec<usize> = (0..t.len()).filter(|&i| t[i] >= window.0 - tol && t[i] <= window.1 + tol).collect();
    if let Some(&i) = idx.iter().find(|&&i| !(y[i] > 0.0)) {
        return Err(Error::NonPositive { index: i, value: y[i] });
    }
    if idx.len() < 5 {
        return Err(Error::TooFewPoints { needed: 5, got: idx.len() });
    }
    let x: Vec<f64> = idx.iter().map(|&i| (1.0 + t[i]).ln()).collect();
    let ly: Vec<f64> = idx.iter().map(|&i| y[i].ln()).collect();
    let (exponent, intercept, r2) = least_squares(&x, &ly);
    Ok(DecayFit { exponent, intercept, r2, window, n_points: idx.len() })
}

/// Fit `log e` against `log h`; `h` must be geometric within 1 %.
pub fn fit_order(h: &[f64], e: &[f64]) -> Result<OrderFit> {
    if h.len() != e.len() {
        return Err(Error::InvalidParameter("parameter and error series differ in length".into()));
    }
    if h.len() < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: h.len() });
    }
    if let Some(i) = (0..e.len()).find(|&i| !(e[i] > 0.0)) {
        return Err(Error::NonPositive { index: i, value: e[i] });
    }
    if let Some(i) = (0..h.len()).find(|&i| !(h[i] > 0.0)) {
        return Err(Error::NonPositive { index: i, value: h[i] });
    }
    let ratio = h[1] / h[0];
    for i in 2..h.len() {
        let r = h[i] / h[i - 1];
        if (r / ratio - 1.0).abs() > 0.01 {
            return Err(Error::NotGeometric(format!("ratio {r:.6} at index {i} differs from {ratio:.6}")));
        }
    }
    if (ratio - 1.0).abs() < 1e-12 {
        return Err(Error::NotGeometric("constant sequence".into()));
    }
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let (order, intercept, r2) = least_squares(&x, &y);
    Ok(OrderFit { order, intercept, r2, parameters: h.to_vec(), errors: e.to_vec() })
}

/// Thresholds of the whole-plane emulation window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowCriteria {
    /// `t_a` is the first time the energy drops below this fraction of its initial value.
    pub transient_fraction: f64,
    /// `t_b` is the first time the edge fraction exceeds this value.
    pub edge_threshold: f64,
    /// Minimum of `log10((1 + t_b)/(1 + t_a))`.
    pub min_decades: f64,
}

impl Default for WindowCriteria {
    fn default() -> Self {
        Self { transient_fraction: 0.9, edge_threshold: 1e-6, min_decades: 1.0 }
    }
}

/// Fit window `[t_a, t_b]` from an energy series and an edge-fraction monitor.
///
/// When the edge threshold is crossed, `t_b` is the last output time before
/// the crossing.
pub fn window_select(t: &[f64], energy: &[f64], edge: &[f64], criteria: &WindowCriteria) -> Result<(f64, f64)> {
    if t.is_empty() || t.len() != energy.len() || t.len() != edge.len() {
        return Err(Error::MissingData("window selection needs equal-length, non-empty series".into()));
    }
    let e0 = energy[0];
    let a = (0..t.len())
        .find(|&i| energy[i] < criteria.transient_fraction * e0)
        .ok_or_else(|| Error::WindowTooShort("energy never leaves the initial transient".into()))?;
    let b = match (0..t.len()).find(|&i| edge[i] > criteria.edge_threshold) {
        Some(0) => return Err(Error::WindowTooShort("edge threshold exceeded at t = 0".into())),
        Some(i) => i - 1,
        None => t.len() - 1,
    };
    let (ta, tb) = (t[a], t[b]);
    if b <= a || ((1.0 + tb) / (1.0 + ta)).log10() < criteria.min_decades {
        return Err(Error::WindowTooShort(format!("[{ta}, {tb}] spans less than {} decade(s) in 1 + t", criteria.min_decades)));
    }
    Ok((ta, tb))
}

/// Two whitespace-separated columns, one point per line, for gnuplot.
pub fn gnuplot_columns(x: &[f64], y: &[f64]) -> String {
    let mut out = String::new();
    for (a, b) in x.iter().zip(y) {
        let _ = writeln!(out, "{a:.17e} {b:.17e}");
    }
    out
}
