//! Artifact directory: CSV tables, JSON reports, field snapshots.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use hnslab::diagnostics::NormRow;
use hnslab::spectral::write_snapshot;
use hnslab::Field;

use crate::config::{Experiment, ScenarioConfig};
use crate::error::CliError;

pub const CODE_HASH: &str = env!("HNSLAB_CODE_HASH");

pub struct Artifacts<'a> {
    dir: PathBuf,
    scenario: &'a ScenarioConfig,
    experiment: Experiment,
}

#[derive(Serialize)]
struct Report<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    code_hash: &'static str,
    experiment: &'static str,
    complete: bool,
    config: &'a ScenarioConfig,
    resolved: &'a C,
    result: &'a R,
}

impl<'a> Artifacts<'a> {
    pub fn create(dir: &Path, scenario: &'a ScenarioConfig, experiment: Experiment) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), scenario, experiment })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn csv(&self, name: &str) -> Result<csv::Writer<File>, CliError> {
        Ok(csv::Writer::from_path(self.path(name))?)
    }

    /// Summary with the scenario as written, the resolved run parameters and the code hash.
    pub fn report<C: Serialize, R: Serialize>(&self, name: &str, complete: bool, resolved: &C, result: &R) -> Result<(), CliError> {
        let report = Report {
            tool: "hnslab",
            version: env!("CARGO_PKG_VERSION"),
            code_hash: CODE_HASH,
            experiment: self.experiment.name(),
            complete,
            config: self.scenario,
            resolved,
            result,
        };
        let mut out = BufWriter::new(File::create(self.path(name))?);
        serde_json::to_writer_pretty(&mut out, &report)?;
        out.write_all(b"\n")?;
        out.flush()?;
        log::info!("wrote {}", self.path(name).display());
        Ok(())
    }

    pub fn snapshot(&self, name: &str, field: &Field, t: f64) -> Result<(), CliError> {
        let dir = self.path("snapshots");
        fs::create_dir_all(&dir)?;
        let mut out = BufWriter::new(File::create(dir.join(name))?);
        write_snapshot(&mut out, field, t)?;
        out.flush()?;
        Ok(())
    }
}

/// Shortest round-trip decimal, in exponent form for very small or large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

const NORM_COLUMNS: [&str; 22] = [
    "t",
    "tau",
    "u_l2",
    "u_m2",
    "grad_u_m2",
    "u_inf",
    "ut_l2",
    "ut_m2",
    "grad_u_l2",
    "grad_u_inf",
    "ut_1inf",
    "rot_l2",
    "rot_inf",
    "besov_rot",
    "u_m1q",
    "ut_m1q",
    "grad_u_m1q",
    "energy",
    "gronwall",
    "edge_fraction",
    "residual",
    "tg_error",
];

/// Norm time series; `tau` is empty for Navier-Stokes runs.
pub fn write_norms(w: &mut csv::Writer<File>, rows: &[NormRow], tau: Option<f64>, tg_errors: Option<&[f64]>) -> Result<(), CliError> {
    w.write_record(NORM_COLUMNS)?;
    for (i, r) in rows.iter().enumerate() {
        w.write_record([
            num(r.t),
            opt(tau),
            num(r.u_l2),
            num(r.u_m2),
            num(r.grad_u_m2),
            num(r.u_inf),
            num(r.ut_l2),
            num(r.ut_m2),
            num(r.grad_u_l2),
            num(r.grad_u_inf),
            num(r.ut_1inf),
            num(r.rot_l2),
            num(r.rot_inf),
            opt(r.besov_rot),
            opt(r.u_m1q),
            opt(r.ut_m1q),
            opt(r.grad_u_m1q),
            num(r.energy),
            num(r.gronwall),
            num(r.edge_fraction),
            opt(r.residual),
            opt(tg_errors.and_then(|e| e.get(i).copied())),
        ])?;
    }
    w.flush()?;
    Ok(())
}
