use std::collections::BTreeMap;

use super::battery::{BatteryConfig, NormRow};
use super::residual::RepresentationTracker;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::SpectralField;

/// Stored state at an output time.
#[derive(Clone, Debug)]
pub struct StateSample<T: Real> {
    pub t: f64,
    pub u: SpectralField<T>,
    /// `u_t`.
    pub w: SpectralField<T>,
}

/// Norm battery rows at strictly increasing times, optional states and the
/// representation accumulator of the run that produced them.
#[derive(Clone, Debug)]
pub struct TrajectoryRecord<T: Real> {
    pub battery: BatteryConfig,
    pub rows: Vec<NormRow>,
    pub states: Vec<StateSample<T>>,
    pub accumulator: Option<RepresentationTracker<T>>,
    pub complete: bool,
    pub failure: Option<Error>,
    /// Free-form metadata (data preparation, config hash, ...).
    pub metadata: BTreeMap<String, String>,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn new(battery: BatteryConfig) -> Self {
        Self { battery, rows: Vec::new(), states: Vec::new(), accumulator: None, complete: true, failure: None, metadata: BTreeMap::new() }
    }

    /// Append a row; panics if its time does not exceed the last one.
    pub fn push(&mut self, row: NormRow) {
        if let Some(last) = self.rows.last() {
            assert!(row.t > last.t, "trajectory times must increase ({} after {})", row.t, last.t);
        }
        self.rows.push(row);
    }

    pub fn fail(&mut self, e: Error) {
        self.complete = false;
        self.failure = Some(e);
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn column(&self, f: impl Fn(&NormRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    /// Column of an optional quantity; errors if any row lacks it.
    pub fn optional_column(&self, name: &str, f: impl Fn(&NormRow) -> Option<f64>) -> Result<Vec<f64>> {
        self.rows.iter().map(|r| f(r).ok_or_else(|| Error::MissingData(format!("column `{name}` at t = {}", r.t)))).collect()
    }

    pub fn row_at(&self, t: f64) -> Option<&NormRow> {
        self.rows.iter().find(|r| (r.t - t).abs() <= 1e-9 * t.abs().max(1.0))
    }
}
