//! Damped-wave verification: periodic box propagator against the whole-plane
//! radial oracle, decay exponents and the small-`tau` prefactor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagators::{dw_propagate, dw_wholespace_norm_oracle, oracle_extent, DampedWaveParams, OracleNorm, RadialProfile};
use crate::rates::{fit_decay, fit_order, DecayFit, OrderFit};
use crate::spectral::{sobolev_norm, Grid, MultiIndex, SpectralField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DwVerifyConfig {
    pub n: usize,
    pub length: f64,
    pub mu: f64,
    pub profile: RadialProfile,
    /// Relaxation times for the box comparison.
    pub box_taus: Vec<f64>,
    pub box_times: Vec<f64>,
    pub box_tolerance: f64,
    pub rate_tau: f64,
    /// Oracle evaluation times for the exponent fits.
    pub rate_times: Vec<f64>,
    pub rate_tolerance: f64,
    /// Geometric sequence of `tau` for the prefactor fit.
    pub prefactor_taus: Vec<f64>,
    pub prefactor_time: f64,
    pub prefactor_tolerance: f64,
}

impl Default for DwVerifyConfig {
    fn default() -> Self {
        Self {
            n: 128,
            length: 64.0,
            mu: 1.0,
            profile: RadialProfile::Gaussian { amplitude: 1.0, width: 2f64.sqrt() },
            box_taus: vec![1.0, 0.1, 0.01],
            box_times: (0..=20).map(|i| 0.5 * i as f64).collect(),
            box_tolerance: 1e-4,
            rate_tau: 0.1,
            rate_times: geometric(10.0, 200.0, 16),
            rate_tolerance: 0.1,
            prefactor_taus: vec![0.1, 0.05, 0.025, 0.0125],
            prefactor_time: 1.0,
            prefactor_tolerance: 0.05,
        }
    }
}

/// `count` points from `a` to `b` with constant ratio.
pub fn geometric(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| a * (b / a).powf(i as f64 / (count - 1) as f64)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxComparison {
    pub tau: f64,
    pub t: f64,
    pub box_norm: f64,
    pub oracle_norm: f64,
    pub rel_error: f64,
    /// Solution support still inside the box (no wraparound).
    pub in_window: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateCell {
    pub alpha_order: u32,
    pub j: u32,
    pub expected: f64,
    pub fit: DecayFit,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrefactorCell {
    pub j: u32,
    /// Exponent of `tau` in the bound `c tau^(1-j)`.
    pub bound_exponent: f64,
    pub fit: OrderFit,
    /// `j = 0`: order within tolerance of 1. `j = 1`: order at least the bound's exponent.
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DwReport {
    pub box_rows: Vec<BoxComparison>,
    pub box_max_rel_error: f64,
    pub box_pass: bool,
    pub rates: Vec<RateCell>,
    pub prefactors: Vec<PrefactorCell>,
}

impl DwReport {
    pub fn pass(&self) -> bool {
        self.box_pass && self.rates.iter().all(|c| c.pass) && self.prefactors.iter().all(|c| c.pass)
    }
}

/// Sample a radial profile centred in the box.
pub fn sample_profile(grid: &Grid<f64>, profile: &RadialProfile) -> SpectralField<f64> {
    let c = 0.5 * grid.length();
    SpectralField::from_fn_scalar(grid, |x, y| profile.value(((x - c).powi(2) + (y - c).powi(2)).sqrt()))
}

/// Box `||v(t)||_2` against the oracle for every `(tau, t)`.
pub fn box_vs_oracle(cfg: &DwVerifyConfig) -> Result<Vec<BoxComparison>> {
    let grid = Grid::new(cfg.n, cfg.length)?;
    let v1 = sample_profile(&grid, &cfg.profile);
    let mut rows = Vec::new();
    for &tau in &cfg.box_taus {
        let params = DampedWaveParams::new(tau, cfg.mu)?;
        for &t in &cfg.box_times {
            let box_norm = sobolev_norm(&dw_propagate(&v1, t, &params, 0)?, 0)?;
            let oracle = dw_wholespace_norm_oracle(&cfg.profile, t, &params, MultiIndex::ZERO, 0, OracleNorm::L2)?;
            let rel_error = if oracle.norm > 0.0 { (box_norm - oracle.norm).abs() / oracle.norm } else { box_norm };
            let in_window = oracle_extent(&cfg.profile, t, &params) < 0.5 * cfg.length;
            rows.push(BoxComparison { tau, t, box_norm, oracle_norm: oracle.norm, rel_error, in_window });
        }
    }
    Ok(rows)
}

/// Oracle decay exponents for `(|alpha|, j)` in `{(0,0), (1,0), (0,1)}` against `-(1/2 + |alpha|/2 + j)`.
pub fn oracle_rates(cfg: &DwVerifyConfig) -> Result<Vec<RateCell>> {
    let params = DampedWaveParams::new(cfg.rate_tau, cfg.mu)?;
    let window = match (cfg.rate_times.first(), cfg.rate_times.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::TooFewPoints { needed: 5, got: 0 }),
    };
    [(MultiIndex::ZERO, 0), (MultiIndex(1, 0), 0), (MultiIndex::ZERO, 1)]
        .into_iter()
        .map(|(alpha, j)| {
            let y = cfg
                .rate_times
                .iter()
                .map(|&t| dw_wholespace_norm_oracle(&cfg.profile, t, &params, alpha, j, OracleNorm::L2).map(|v| v.norm))
                .collect::<Result<Vec<_>>>()?;
            let fit = fit_decay(&cfg.rate_times, &y, window)?;
            let expected = -(0.5 + 0.5 * alpha.order() as f64 + j as f64);
            let pass = (fit.exponent - expected).abs() <= cfg.rate_tolerance;
            Ok(RateCell { alpha_order: alpha.order(), j, expected, fit, pass })
        })
        .collect()
}

/// Order in `tau` of `||d_t^j v(t)||_2` at fixed `t`, for `j = 0, 1`.
pub fn tau_prefactors(cfg: &DwVerifyConfig) -> Result<Vec<PrefactorCell>> {
    (0..2u32)
        .map(|j| {
            let e = cfg
                .prefactor_taus
                .iter()
                .map(|&tau| {
                    let params = DampedWaveParams::new(tau, cfg.mu)?;
                    dw_wholespace_norm_oracle(&cfg.profile, cfg.prefactor_time, &params, MultiIndex::ZERO, j, OracleNorm::L2)
                        .map(|v| v.norm)
                })
                .collect::<Result<Vec<_>>>()?;
            let fit = fit_order(&cfg.prefactor_taus, &e)?;
            let bound_exponent = 1.0 - j as f64;
            let pass = if j == 0 {
                (fit.order - 1.0).abs() <= cfg.prefactor_tolerance
            } else {
                fit.order >= bound_exponent - cfg.prefactor_tolerance
            };
            Ok(PrefactorCell { j, bound_exponent, fit, pass })
        })
        .collect()
}

pub fn dw_verify(cfg: &DwVerifyConfig) -> Result<DwReport> {
    let box_rows = box_vs_oracle(cfg)?;
    let in_window: Vec<&BoxComparison> = box_rows.iter().filter(|r| r.in_window).collect();
    let box_max_rel_error = in_window.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    let box_pass = !in_window.is_empty() && box_max_rel_error <= cfg.box_tolerance;
    Ok(DwReport { box_max_rel_error, box_pass, rates: oracle_rates(cfg)?, prefactors: tau_prefactors(cfg)?, box_rows })
}
