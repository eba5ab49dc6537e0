//! Stability map over relaxation time and data amplitude.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{AnalysisParams, BatteryConfig};
use crate::error::Result;
use crate::hns::{hns_run, make_initial_data, DataKind, DataSpec, HnsStepperConfig, Preparation, RunOptions};
use crate::schedule::uniform_times;
use crate::spectral::Grid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub n: usize,
    pub length: f64,
    pub kind: DataKind,
    pub seed: u64,
    pub preparation: Preparation,
    pub analysis: AnalysisParams,
    pub taus: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub t_end: f64,
    pub outputs: usize,
    /// `E_m(T) <= decay_ratio * E_m(0)` classifies a cell as decayed.
    pub decay_ratio: f64,
    /// Step is chosen per cell from the CFL and stiffness limits at this
    /// multiple of the initial peak speed.
    pub speed_margin: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            n: 64,
            length: 16.0,
            kind: DataKind::LocalizedRandom { width: 1.5 },
            seed: 1,
            preparation: Preparation::Zero,
            analysis: AnalysisParams::default(),
            taus: vec![0.4, 0.2, 0.1, 0.05, 0.025],
            amplitudes: vec![1.0, 16.0, 64.0, 256.0],
            t_end: 4.0,
            outputs: 40,
            decay_ratio: 0.5,
            speed_margin: 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellOutcome {
    Decayed,
    Bounded,
    Unstable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub tau: f64,
    pub amplitude: f64,
    pub dt: f64,
    pub outcome: CellOutcome,
    /// `E_m` at the last completed output over `E_m(0)`.
    pub energy_ratio: f64,
    pub failure: Option<String>,
}

/// Cells in row-major order: `taus` outer, `amplitudes` inner.
pub fn cells(cfg: &ScanConfig) -> Vec<(f64, f64)> {
    cfg.taus.iter().flat_map(|&t| cfg.amplitudes.iter().map(move |&a| (t, a))).collect()
}

pub fn scan_cell(cfg: &ScanConfig, tau: f64, amplitude: f64) -> Result<ScanCell> {
    let grid = Grid::new(cfg.n, cfg.length)?;
    let spec = DataSpec { kind: cfg.kind, amplitude, seed: cfg.seed, preparation: cfg.preparation };
    let (u0, u1) = make_initial_data(&grid, &spec, cfg.analysis.mu)?;
    let spacing = cfg.t_end / cfg.outputs as f64;
    let stepper = HnsStepperConfig::auto(tau, cfg.n, cfg.length, cfg.speed_margin * amplitude, spacing);
    let battery = BatteryConfig::new(AnalysisParams { tau, ..cfg.analysis });
    let times = uniform_times(cfg.t_end, cfg.outputs);
    let record = hns_run(&u0, &u1, tau, cfg.analysis.mu, &stepper, &times, &battery, RunOptions::default())?;
    let e0 = record.rows.first().map_or(0.0, |r| r.energy);
    let energy_ratio = match record.rows.last() {
        Some(r) if e0 > 0.0 => r.energy / e0,
        _ => 0.0,
    };
    let outcome = if !record.complete {
        CellOutcome::Unstable
    } else if energy_ratio <= cfg.decay_ratio {
        CellOutcome::Decayed
    } else {
        CellOutcome::Bounded
    };
    Ok(ScanCell { tau, amplitude, dt: stepper.dt, outcome, energy_ratio, failure: record.failure.map(|e| e.to_string()) })
}

pub fn tau_scan(cfg: &ScanConfig) -> Result<Vec<ScanCell>> {
    cells(cfg).into_iter().map(|(tau, a)| scan_cell(cfg, tau, a)).collect()
}
