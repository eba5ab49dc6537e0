//! Long-time decay suites: run on a large box, select the whole-plane window
//! and fit the algebraic exponents of the norm battery.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{AnalysisParams, BatteryConfig, NormRow, TrajectoryRecord};
use crate::error::Result;
use crate::hns::{hns_run, make_initial_data, DataKind, DataSpec, HnsStepperConfig, Preparation, RunOptions, Scheme};
use crate::ns::ns_run;
use crate::rates::{fit_decay, window_select, DecayFit, WindowCriteria};
use crate::schedule::log_times;
use crate::spectral::Grid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayConfig {
    pub n: usize,
    pub length: f64,
    pub data: DataSpec,
    pub analysis: AnalysisParams,
    pub dt: f64,
    pub scheme: Scheme,
    pub t_end: f64,
    /// Output times per decade of `1 + t`.
    pub per_decade: usize,
    /// Fixed fit window; selected from the run when absent.
    pub window: Option<(f64, f64)>,
    pub criteria: WindowCriteria,
    pub tolerance: f64,
}

impl DecayConfig {
    /// Navier-Stokes suite: localized random data on a `512^2`, `L = 256` box.
    pub fn ns_standard() -> Self {
        Self {
            n: 512,
            length: 256.0,
            data: DataSpec {
                kind: DataKind::LocalizedRandom { width: 2f64.sqrt() },
                amplitude: 0.2,
                seed: 1,
                preparation: Preparation::Zero,
            },
            analysis: AnalysisParams::default(),
            dt: 0.25,
            scheme: Scheme::Etd2,
            t_end: 200.0,
            per_decade: 20,
            window: None,
            criteria: WindowCriteria::default(),
            tolerance: 0.15,
        }
    }

    /// Hyperbolic suite: smooth vortex pair, well prepared, `m = m1 + 7`.
    pub fn hns_standard() -> Self {
        Self {
            data: DataSpec {
                kind: DataKind::VortexPair { width: 2f64.sqrt() },
                amplitude: 0.2,
                seed: 1,
                preparation: Preparation::WellPrepared,
            },
            analysis: AnalysisParams { m: 9, ..AnalysisParams::default() },
            t_end: 250.0,
            per_decade: 15,
            ..Self::ns_standard()
        }
    }
}

/// Acceptance rule for a fitted exponent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Target {
    Within { value: f64, tolerance: f64 },
    AtMost { value: f64 },
}

impl Target {
    pub fn value(&self) -> f64 {
        match *self {
            Target::Within { value, .. } | Target::AtMost { value } => value,
        }
    }

    pub fn accepts(&self, exponent: f64) -> bool {
        match *self {
            Target::Within { value, tolerance } => (exponent - value).abs() <= tolerance,
            Target::AtMost { value } => exponent <= value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentCheck {
    pub quantity: String,
    pub target: Target,
    pub fit: DecayFit,
    pub pass: bool,
    /// The series decays at least as fast as the target rate.
    pub at_least_target_rate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub window: (f64, f64),
    pub checks: Vec<ExponentCheck>,
    pub complete: bool,
}

impl DecayReport {
    pub fn pass(&self) -> bool {
        self.complete && self.checks.iter().all(|c| c.pass)
    }
}

type Column = (&'static str, fn(&NormRow, f64) -> f64, Target);

fn checks(record: &TrajectoryRecord<f64>, window: (f64, f64), columns: &[Column], tau: f64) -> Result<Vec<ExponentCheck>> {
    let t = record.times();
    columns
        .iter()
        .map(|&(quantity, get, target)| {
            let y: Vec<f64> = record.rows.iter().map(|r| get(r, tau)).collect();
            let fit = fit_decay(&t, &y, window)?;
            let tol = match target {
                Target::Within { tolerance, .. } => tolerance,
                Target::AtMost { .. } => 0.0,
            };
            Ok(ExponentCheck {
                quantity: quantity.to_string(),
                pass: target.accepts(fit.exponent),
                at_least_target_rate: fit.exponent <= target.value() + tol,
                target,
                fit,
            })
        })
        .collect()
}

/// Configured window, or the one selected from energy and edge monitor.
pub fn fit_window(record: &TrajectoryRecord<f64>, fixed: Option<(f64, f64)>, criteria: &WindowCriteria) -> Result<(f64, f64)> {
    match fixed {
        Some(w) => Ok(w),
        None => window_select(&record.times(), &record.column(|r| r.energy), &record.column(|r| r.edge_fraction), criteria),
    }
}

/// Navier-Stokes exponents: `||v||_2`, `||grad v||_2`, `||v||_inf`, `||v_t||_2` and `E_m`.
pub fn ns_decay_checks(record: &TrajectoryRecord<f64>, window: (f64, f64), tolerance: f64) -> Result<Vec<ExponentCheck>> {
    let w = |value| Target::Within { value, tolerance };
    let columns: [Column; 5] = [
        ("||v||_2", |r, _| r.u_l2, w(-0.5)),
        ("||grad v||_2", |r, _| r.grad_u_l2, w(-1.0)),
        ("||v||_inf", |r, _| r.u_inf, w(-1.0)),
        ("||v_t||_2", |r, _| r.ut_l2, w(-1.5)),
        ("E_m", |r, _| r.energy, Target::AtMost { value: -0.9 }),
    ];
    checks(record, window, &columns, 0.0)
}

/// The six exponents of the large-data decay table for `(eps, q)`.
pub fn hns_decay_checks(
    record: &TrajectoryRecord<f64>,
    window: (f64, f64),
    analysis: &AnalysisParams,
    tolerance: f64,
) -> Result<Vec<ExponentCheck>> {
    let (eps, q) = (analysis.eps, analysis.q);
    let w = |value| Target::Within { value, tolerance };
    let columns: [Column; 6] = [
        ("||u||_{m,2}", |r, _| r.u_m2, w(-(0.5 - eps))),
        ("tau ||u_t||_{m,2}", |r, tau| tau * r.ut_m2, w(-(1.0 - eps))),
        ("||grad u||_{m,2}", |r, _| r.grad_u_m2, w(-(1.0 - eps))),
        ("||u||_{m1,q}", |r, _| r.u_m1q.unwrap_or(f64::NAN), w(-(1.0 - 2.0 / q))),
        ("tau ||u_t||_{m1,q}", |r, tau| tau * r.ut_m1q.unwrap_or(f64::NAN), w(-(1.5 - 2.0 / q))),
        ("||grad u||_{m1,q}", |r, _| r.grad_u_m1q.unwrap_or(f64::NAN), w(-(1.5 - 2.0 / q))),
    ];
    checks(record, window, &columns, analysis.tau)
}

pub struct DecayOutcome {
    pub record: TrajectoryRecord<f64>,
    pub report: DecayReport,
}

fn finish(record: TrajectoryRecord<f64>, cfg: &DecayConfig, hyperbolic: bool) -> Result<DecayOutcome> {
    let window = fit_window(&record, cfg.window, &cfg.criteria)?;
    let checks = if hyperbolic {
        hns_decay_checks(&record, window, &cfg.analysis, cfg.tolerance)?
    } else {
        ns_decay_checks(&record, window, cfg.tolerance)?
    };
    let report = DecayReport { window, checks, complete: record.complete };
    Ok(DecayOutcome { record, report })
}

pub fn ns_decay(cfg: &DecayConfig) -> Result<DecayOutcome> {
    cfg.analysis.validate()?;
    let grid = Grid::new(cfg.n, cfg.length)?;
    let (v0, _) = make_initial_data(&grid, &cfg.data, cfg.analysis.mu)?;
    let times = log_times(cfg.t_end, cfg.per_decade, cfg.dt);
    let record = ns_run(&v0, cfg.analysis.mu, cfg.dt, &times, &BatteryConfig::new(cfg.analysis), false)?;
    finish(record, cfg, false)
}

pub fn hns_decay(cfg: &DecayConfig) -> Result<DecayOutcome> {
    cfg.analysis.validate()?;
    let grid = Grid::new(cfg.n, cfg.length)?;
    let (u0, u1) = make_initial_data(&grid, &cfg.data, cfg.analysis.mu)?;
    let times = log_times(cfg.t_end, cfg.per_decade, cfg.dt);
    let stepper = HnsStepperConfig::new(cfg.dt).with_scheme(cfg.scheme);
    let battery = BatteryConfig::new(cfg.analysis).with_lq();
    let record = hns_run(&u0, &u1, cfg.analysis.tau, cfg.analysis.mu, &stepper, &times, &battery, RunOptions::default())?;
    finish(record, cfg, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets() {
        let w = Target::Within { value: -0.5, tolerance: 0.15 };
        assert!(w.accepts(-0.6) && !w.accepts(-0.7) && !w.accepts(-0.3));
        let a = Target::AtMost { value: -0.9 };
        assert!(a.accepts(-1.3) && !a.accepts(-0.8));
    }

    #[test]
    fn small_ns_suite_runs() {
        let cfg = DecayConfig { n: 128, length: 128.0, t_end: 40.0, dt: 0.5, window: Some((1.0, 40.0)), ..DecayConfig::ns_standard() };
        let out = ns_decay(&cfg).unwrap();
        assert!(out.report.complete);
        assert_eq!(out.report.checks.len(), 5);
        assert!(out.report.checks.iter().all(|c| c.fit.exponent < 0.0));
    }
}
