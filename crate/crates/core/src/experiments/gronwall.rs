//! Gronwall constant of the energy inequality under grid refinement.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{gronwall_report, AnalysisParams, BatteryConfig, GronwallReport};
use crate::error::Result;
use crate::hns::{hns_run, make_initial_data, DataKind, DataSpec, HnsStepperConfig, Preparation, RunOptions};
use crate::schedule::uniform_times;
use crate::spectral::Grid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GronwallCase {
    pub name: String,
    pub length: f64,
    pub data: DataSpec,
    pub tau: f64,
    pub dt: f64,
    pub t_end: f64,
    pub outputs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GronwallSuiteConfig {
    /// Coarse resolution; every case is rerun at `2 n`.
    pub n: usize,
    pub analysis: AnalysisParams,
    pub cases: Vec<GronwallCase>,
    /// Admissible relative change of `C_fit` under refinement.
    pub tolerance: f64,
}

impl Default for GronwallSuiteConfig {
    fn default() -> Self {
        let case = |name: &str, kind, amplitude, preparation, tau, dt, t_end| GronwallCase {
            name: name.to_string(),
            length: 16.0,
            data: DataSpec { kind, amplitude, seed: 3, preparation },
            tau,
            dt,
            t_end,
            outputs: 100,
        };
        let random = DataKind::LocalizedRandom { width: 2.0 };
        Self {
            n: 128,
            analysis: AnalysisParams { m: 3, ..AnalysisParams::default() },
            cases: vec![
                case("taylor-green", DataKind::TaylorGreen, 1.0, Preparation::WellPrepared, 0.1, 0.01, 2.0),
                case("vortex-pair", DataKind::VortexPair { width: 1.0 }, 1.0, Preparation::WellPrepared, 0.1, 0.005, 2.0),
                case("random-small", random, 1.0, Preparation::Independent { amplitude: 1.0, seed: 9 }, 0.1, 0.005, 2.0),
                case("random-strong", random, 20.0, Preparation::WellPrepared, 0.02, 0.001, 1.0),
                case("linear", random, 1e-6, Preparation::Independent { amplitude: 1e-6, seed: 9 }, 0.1, 0.005, 2.0),
            ],
            tolerance: 0.2,
        }
    }
}

pub fn gronwall_case(case: &GronwallCase, n: usize, analysis: &AnalysisParams) -> Result<(GronwallReport, bool)> {
    let grid = Grid::new(n, case.length)?;
    let (u0, u1) = make_initial_data(&grid, &case.data, analysis.mu)?;
    let battery = BatteryConfig::new(AnalysisParams { tau: case.tau, ..*analysis });
    let times = uniform_times(case.t_end, case.outputs);
    let record = hns_run(&u0, &u1, case.tau, analysis.mu, &HnsStepperConfig::new(case.dt), &times, &battery, RunOptions::default())?;
    Ok((gronwall_report(&record)?, record.complete))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GronwallComparison {
    pub name: String,
    pub coarse: GronwallReport,
    pub fine: GronwallReport,
    pub complete: bool,
    /// `|C_fine - C_coarse| / C_coarse`; zero when both vanish.
    pub relative_change: f64,
    pub stable: bool,
}

pub fn compare(name: &str, coarse: (GronwallReport, bool), fine: (GronwallReport, bool), tolerance: f64) -> GronwallComparison {
    let (c, f) = (coarse.0.c_fit, fine.0.c_fit);
    let relative_change = if c == 0.0 && f == 0.0 {
        0.0
    } else if c == 0.0 {
        f64::INFINITY
    } else {
        (f - c).abs() / c
    };
    let complete = coarse.1 && fine.1;
    GronwallComparison {
        name: name.to_string(),
        stable: complete && c.is_finite() && f.is_finite() && relative_change <= tolerance,
        coarse: coarse.0,
        fine: fine.0,
        complete,
        relative_change,
    }
}

pub fn gronwall_suite(cfg: &GronwallSuiteConfig) -> Result<Vec<GronwallComparison>> {
    cfg.analysis.validate()?;
    cfg.cases
        .iter()
        .map(|case| {
            let coarse = gronwall_case(case, cfg.n, &cfg.analysis)?;
            let fine = gronwall_case(case, 2 * cfg.n, &cfg.analysis)?;
            Ok(compare(&case.name, coarse, fine, cfg.tolerance))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(c_fit: f64) -> (GronwallReport, bool) {
        (GronwallReport { c_fit, margin: 0.0, integral: 1.0, t_sup: 0.0 }, true)
    }

    #[test]
    fn comparison_rules() {
        assert!(compare("a", report(0.0), report(0.0), 0.2).stable);
        assert!(compare("b", report(1.0), report(1.15), 0.2).stable);
        assert!(!compare("c", report(1.0), report(1.3), 0.2).stable);
        assert!(!compare("d", report(0.0), report(0.1), 0.2).stable);
    }
}
