//! Relaxation limit: distance between the hyperbolic solution `u^tau` and the
//! Navier-Stokes solution `v` with the same `u0`, as `tau -> 0`.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{AnalysisParams, BatteryConfig, StateSample};
use crate::error::{Error, Result};
use crate::hns::{hns_run, make_initial_data, DataKind, DataSpec, HnsStepperConfig, Preparation, RunOptions, Scheme};
use crate::ns::ns_run;
use crate::rates::{fit_order, OrderFit};
use crate::schedule::uniform_times;
use crate::spectral::{sobolev_norm, Grid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxConfig {
    pub n: usize,
    pub length: f64,
    pub data: DataSpec,
    /// `m` sets the orders `m + 2` (for `u`) and `m + 1` (for `u_t`).
    pub analysis: AnalysisParams,
    /// Geometric family of relaxation times.
    pub taus: Vec<f64>,
    /// Hyperbolic step as a fraction of `tau`.
    pub dt_factor: f64,
    pub scheme: Scheme,
    /// Navier-Stokes reference step; must divide the output spacing.
    pub reference_dt: f64,
    pub t_end: f64,
    pub outputs: usize,
    /// Fit the orders over the stable members only.
    pub exclude_unstable: bool,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        Self {
            n: 64,
            length: 16.0,
            data: DataSpec {
                kind: DataKind::LocalizedRandom { width: 1.5 },
                amplitude: 0.5,
                seed: 7,
                preparation: Preparation::WellPrepared,
            },
            analysis: AnalysisParams { m: 1, ..AnalysisParams::default() },
            taus: vec![0.1, 0.05, 0.025, 0.0125],
            dt_factor: 0.5,
            scheme: Scheme::Etd2,
            reference_dt: 1e-3,
            t_end: 2.0,
            outputs: 40,
            exclude_unstable: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxMember {
    pub tau: f64,
    pub dt: f64,
    pub complete: bool,
    /// `sup_t ||u^tau - v||_{m+2,2}` over the output times.
    pub u_error: f64,
    /// `sup_t ||u^tau_t - v_t||_{m+1,2}`.
    pub ut_error: f64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxReport {
    pub members: Vec<RelaxMember>,
    pub u_order: Option<OrderFit>,
    pub ut_order: Option<OrderFit>,
    /// Relaxation times left out of the fits.
    pub excluded: Vec<f64>,
}

/// Navier-Stokes reference states `(v, v_t)` at the output times.
pub struct Reference {
    pub samples: Vec<StateSample<f64>>,
}

pub fn output_times(cfg: &RelaxConfig) -> Vec<f64> {
    uniform_times(cfg.t_end, cfg.outputs)
}

fn validate(cfg: &RelaxConfig) -> Result<()> {
    cfg.analysis.validate()?;
    if cfg.taus.len() < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: cfg.taus.len() });
    }
    if !(cfg.dt_factor > 0.0) {
        return Err(Error::InvalidParameter(format!("dt_factor must be positive, got {}", cfg.dt_factor)));
    }
    Ok(())
}

pub fn reference(cfg: &RelaxConfig) -> Result<Reference> {
    validate(cfg)?;
    let grid = Grid::new(cfg.n, cfg.length)?;
    let (v0, _) = make_initial_data(&grid, &cfg.data, cfg.analysis.mu)?;
    let battery = BatteryConfig::new(cfg.analysis);
    let record = ns_run(&v0, cfg.analysis.mu, cfg.reference_dt, &output_times(cfg), &battery, true)?;
    match record.failure {
        Some(e) => Err(e),
        None => Ok(Reference { samples: record.states }),
    }
}

/// One family member against the reference.
pub fn member(cfg: &RelaxConfig, tau: f64, reference: &Reference) -> Result<RelaxMember> {
    let grid = Grid::new(cfg.n, cfg.length)?;
    let (u0, u1) = make_initial_data(&grid, &cfg.data, cfg.analysis.mu)?;
    let dt = cfg.dt_factor * tau;
    let stepper = HnsStepperConfig::new(dt).with_scheme(cfg.scheme);
    let battery = BatteryConfig::new(AnalysisParams { tau, ..cfg.analysis });
    let options = RunOptions { keep_states: true, track_representation: false };
    let record = hns_run(&u0, &u1, tau, cfg.analysis.mu, &stepper, &output_times(cfg), &battery, options)?;
    let m = cfg.analysis.m;
    let (mut u_error, mut ut_error) = (0.0f64, 0.0f64);
    for (s, r) in record.states.iter().zip(&reference.samples) {
        u_error = u_error.max(sobolev_norm(&(&s.u - &r.u), m + 2)?);
        ut_error = ut_error.max(sobolev_norm(&(&s.w - &r.w), m + 1)?);
    }
    Ok(RelaxMember { tau, dt, complete: record.complete, u_error, ut_error, failure: record.failure.map(|e| e.to_string()) })
}

/// Fit the `tau`-orders over the members (ordered as `cfg.taus`).
pub fn assemble(cfg: &RelaxConfig, members: Vec<RelaxMember>) -> Result<RelaxReport> {
    let unstable: Vec<f64> = members.iter().filter(|m| !m.complete).map(|m| m.tau).collect();
    let (excluded, usable): (Vec<f64>, Vec<&RelaxMember>) = if unstable.is_empty() {
        (Vec::new(), members.iter().collect())
    } else if cfg.exclude_unstable {
        (unstable, members.iter().filter(|m| m.complete).collect())
    } else {
        return Ok(RelaxReport { members, u_order: None, ut_order: None, excluded: Vec::new() });
    };
    let taus: Vec<f64> = usable.iter().map(|m| m.tau).collect();
    let fit = |e: Vec<f64>| if taus.len() >= 4 { fit_order(&taus, &e).ok() } else { None };
    let u_order = fit(usable.iter().map(|m| m.u_error).collect());
    let ut_order = fit(usable.iter().map(|m| m.ut_error).collect());
    Ok(RelaxReport { members, u_order, ut_order, excluded })
}

/// Serial driver: reference, every member in order, order fits.
pub fn relax_limit(cfg: &RelaxConfig) -> Result<RelaxReport> {
    let reference = reference(cfg)?;
    let members = cfg.taus.iter().map(|&tau| member(cfg, tau, &reference)).collect::<Result<Vec<_>>>()?;
    assemble(cfg, members)
}
