//! Scenario files: TOML, every section closed to unknown keys.

use std::path::Path;

use serde::{Deserialize, Serialize};

use hnslab::diagnostics::{AnalysisParams, SmallnessVariant};
use hnslab::hns::{DataKind, DataSpec, Preparation, Scheme};
use hnslab::propagators::RadialProfile;
use hnslab::rates::WindowCriteria;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    DwVerify,
    Simulate,
    RelaxLimit,
    Monitor,
    TauScan,
    Smallness,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::DwVerify => "dw-verify",
            Self::Simulate => "simulate",
            Self::RelaxLimit => "relax-limit",
            Self::Monitor => "monitor",
            Self::TauScan => "tau-scan",
            Self::Smallness => "smallness",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Ns,
    Hns,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Must match the subcommand when given.
    pub experiment: Option<Experiment>,
    pub model: Option<Model>,
    pub grid: Option<GridSection>,
    pub params: Option<ParamsSection>,
    pub analysis: Option<AnalysisSection>,
    pub data: Option<DataSection>,
    pub integration: Option<IntegrationSection>,
    pub fit: Option<FitSection>,
    pub output: Option<OutputSection>,
    pub relax: Option<RelaxSection>,
    pub scan: Option<ScanSection>,
    pub monitor: Option<MonitorSection>,
    pub smallness: Option<SmallnessSection>,
    pub dw: Option<DwSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub mu: f64,
    pub tau: Option<f64>,
    pub taus: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub m: u32,
    pub m1: u32,
    pub q: f64,
    pub eps: f64,
    pub eps2: f64,
    pub m0: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataKindName {
    LocalizedRandom,
    TaylorGreen,
    VortexPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreparationName {
    WellPrepared,
    Zero,
    Independent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub kind: DataKindName,
    /// Envelope width; required for localized kinds.
    pub width: Option<f64>,
    /// Peak speed of `u0`.
    pub amplitude: Option<f64>,
    /// Amplitude grid of `tau-scan`.
    pub amplitudes: Option<Vec<f64>>,
    pub seed: u64,
    pub preparation: PreparationName,
    pub u1_amplitude: Option<f64>,
    pub u1_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepSize {
    Fixed(f64),
    Auto(AutoStep),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutoStep {
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    #[default]
    Uniform,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationSection {
    /// Step size, or `"auto"` for the CFL and stiffness limits.
    pub dt: Option<StepSize>,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    pub t_end: f64,
    #[serde(default)]
    pub schedule: ScheduleKind,
    #[serde(default = "default_outputs")]
    pub outputs: usize,
    #[serde(default = "default_per_decade")]
    pub per_decade: usize,
    /// Expected peak speed over the amplitude, used by `dt = "auto"`.
    #[serde(default = "default_speed_margin")]
    pub speed_margin: f64,
}

fn default_scheme() -> Scheme {
    Scheme::Etd2
}
fn default_outputs() -> usize {
    40
}
fn default_per_decade() -> usize {
    20
}
fn default_speed_margin() -> f64 {
    2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    pub window: Option<[f64; 2]>,
    #[serde(default = "default_fit_tolerance")]
    pub tolerance: f64,
    pub transient_fraction: Option<f64>,
    pub edge_threshold: Option<f64>,
    pub min_decades: Option<f64>,
}

fn default_fit_tolerance() -> f64 {
    0.15
}

impl Default for FitSection {
    fn default() -> Self {
        Self { window: None, tolerance: default_fit_tolerance(), transient_fraction: None, edge_threshold: None, min_decades: None }
    }
}

impl FitSection {
    pub fn criteria(&self) -> WindowCriteria {
        let d = WindowCriteria::default();
        WindowCriteria {
            transient_fraction: self.transient_fraction.unwrap_or(d.transient_fraction),
            edge_threshold: self.edge_threshold.unwrap_or(d.edge_threshold),
            min_decades: self.min_decades.unwrap_or(d.min_decades),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: Option<String>,
    /// Write `u` (and `u_t`) snapshots at every output time.
    #[serde(default)]
    pub snapshots: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxSection {
    pub reference_dt: f64,
    #[serde(default = "default_dt_factor")]
    pub dt_factor: f64,
    /// Consent to fitting the orders over the stable members only.
    #[serde(default)]
    pub exclude_unstable: bool,
    #[serde(default = "default_u_order")]
    pub min_u_order: f64,
    #[serde(default = "default_ut_order")]
    pub min_ut_order: f64,
}

fn default_dt_factor() -> f64 {
    0.5
}
fn default_u_order() -> f64 {
    0.9
}
fn default_ut_order() -> f64 {
    0.45
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    #[serde(default = "default_decay_ratio")]
    pub decay_ratio: f64,
}

fn default_decay_ratio() -> f64 {
    0.5
}

impl Default for ScanSection {
    fn default() -> Self {
        Self { decay_ratio: default_decay_ratio() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MonitorSection {
    /// Step sizes of a residual refinement study.
    pub refine_dts: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmallnessSection {
    pub variant: SmallnessVariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileName {
    Gaussian,
    GaussianPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DwSection {
    pub profile: ProfileName,
    pub amplitude: f64,
    pub width: f64,
    pub c2: Option<f64>,
    pub box_taus: Option<Vec<f64>>,
    pub box_times: Option<Vec<f64>>,
    pub box_tolerance: Option<f64>,
    pub rate_tau: Option<f64>,
    pub rate_times: Option<Vec<f64>>,
    pub rate_tolerance: Option<f64>,
    pub prefactor_taus: Option<Vec<f64>>,
    pub prefactor_time: Option<f64>,
    pub prefactor_tolerance: Option<f64>,
}

/// Parse a scenario, reporting the key path of any schema violation.
pub fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = toml::Deserializer::parse(text).map_err(|e| CliError::config("", e.to_string().trim_end()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        CliError::config(path, e.into_inner().message())
    })
}

pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config("", format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

fn need<'a, T>(value: &'a Option<T>, path: &str, experiment: Experiment) -> Result<&'a T, CliError> {
    value.as_ref().ok_or_else(|| CliError::config(path, format!("required by {}", experiment.name())))
}

fn check(ok: bool, path: &str, message: impl Into<String>) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::config(path, message))
    }
}

fn positive(x: f64, path: &str) -> Result<f64, CliError> {
    check(x > 0.0 && x.is_finite(), path, format!("must be positive and finite, got {x}"))?;
    Ok(x)
}

fn list(xs: &[f64], path: &str) -> Result<(), CliError> {
    check(!xs.is_empty(), path, "must not be empty")?;
    for (i, &x) in xs.iter().enumerate() {
        positive(x, &format!("{path}[{i}]"))?;
    }
    Ok(())
}

/// Accessors that turn optional sections into validated run parameters.
pub struct Resolver<'a> {
    pub cfg: &'a ScenarioConfig,
    pub experiment: Experiment,
}

impl<'a> Resolver<'a> {
    pub fn new(cfg: &'a ScenarioConfig, experiment: Experiment) -> Result<Self, CliError> {
        if let Some(e) = cfg.experiment {
            check(e == experiment, "experiment", format!("scenario is `{}` but the command is `{}`", e.name(), experiment.name()))?;
        }
        Ok(Self { cfg, experiment })
    }

    pub fn model(&self) -> Result<Model, CliError> {
        need(&self.cfg.model, "model", self.experiment).copied()
    }

    pub fn grid(&self) -> Result<(usize, f64), CliError> {
        let g = need(&self.cfg.grid, "grid", self.experiment)?;
        check(g.n >= 16 && g.n % 2 == 0, "grid.n", format!("must be even and at least 16, got {}", g.n))?;
        Ok((g.n, positive(g.length, "grid.length")?))
    }

    fn params(&self) -> Result<&'a ParamsSection, CliError> {
        need(&self.cfg.params, "params", self.experiment)
    }

    pub fn mu(&self) -> Result<f64, CliError> {
        positive(self.params()?.mu, "params.mu")
    }

    pub fn tau(&self) -> Result<f64, CliError> {
        let tau = *need(&self.params()?.tau, "params.tau", self.experiment)?;
        check(tau > 0.0 && tau <= 1.0, "params.tau", format!("must lie in (0, 1], got {tau}"))?;
        Ok(tau)
    }

    pub fn taus(&self) -> Result<Vec<f64>, CliError> {
        let taus = need(&self.params()?.taus, "params.taus", self.experiment)?.clone();
        list(&taus, "params.taus")?;
        for (i, &t) in taus.iter().enumerate() {
            check(t <= 1.0, &format!("params.taus[{i}]"), format!("must lie in (0, 1], got {t}"))?;
        }
        Ok(taus)
    }

    /// `taus` with a constant ratio, at least four entries.
    pub fn geometric_taus(&self) -> Result<Vec<f64>, CliError> {
        let taus = self.taus()?;
        check(taus.len() >= 4, "params.taus", format!("need at least 4 values, got {}", taus.len()))?;
        let r0 = taus[1] / taus[0];
        check(r0 != 1.0, "params.taus", "values must differ")?;
        for (i, w) in taus.windows(2).enumerate() {
            let r = w[1] / w[0];
            check((r / r0 - 1.0).abs() <= 1e-6, &format!("params.taus[{}]", i + 1), format!("not geometric: ratio {r} differs from {r0}"))?;
        }
        Ok(taus)
    }

    /// Analysis orders with `tau` and `mu` filled in; `tau` defaults to 1 where the
    /// experiment has no single relaxation time.
    pub fn analysis(&self, tau: f64) -> Result<AnalysisParams, CliError> {
        let a = need(&self.cfg.analysis, "analysis", self.experiment)?;
        let params = AnalysisParams { m: a.m, m1: a.m1, q: a.q, eps: a.eps, eps2: a.eps2, tau, mu: self.mu()?, m0: a.m0 };
        params.validate().map_err(|e| CliError::config("analysis", e.to_string()))?;
        Ok(params)
    }

    fn data_section(&self) -> Result<&'a DataSection, CliError> {
        need(&self.cfg.data, "data", self.experiment)
    }

    pub fn data_kind(&self) -> Result<DataKind, CliError> {
        let d = self.data_section()?;
        let width = |_: ()| -> Result<f64, CliError> { positive(*need(&d.width, "data.width", self.experiment)?, "data.width") };
        Ok(match d.kind {
            DataKindName::LocalizedRandom => DataKind::LocalizedRandom { width: width(())? },
            DataKindName::VortexPair => DataKind::VortexPair { width: width(())? },
            DataKindName::TaylorGreen => {
                check(d.width.is_none(), "data.width", "not used by taylor-green")?;
                DataKind::TaylorGreen
            }
        })
    }

    pub fn preparation(&self) -> Result<Preparation, CliError> {
        let d = self.data_section()?;
        match d.preparation {
            PreparationName::Independent => {
                let amplitude = *need(&d.u1_amplitude, "data.u1_amplitude", self.experiment)?;
                check(amplitude >= 0.0 && amplitude.is_finite(), "data.u1_amplitude", format!("must be non-negative, got {amplitude}"))?;
                Ok(Preparation::Independent { amplitude, seed: *need(&d.u1_seed, "data.u1_seed", self.experiment)? })
            }
            p => {
                check(d.u1_amplitude.is_none(), "data.u1_amplitude", "only used with preparation = \"independent\"")?;
                check(d.u1_seed.is_none(), "data.u1_seed", "only used with preparation = \"independent\"")?;
                Ok(if p == PreparationName::Zero { Preparation::Zero } else { Preparation::WellPrepared })
            }
        }
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        Ok(self.data_section()?.seed)
    }

    pub fn data(&self) -> Result<DataSpec, CliError> {
        let d = self.data_section()?;
        let amplitude = *need(&d.amplitude, "data.amplitude", self.experiment)?;
        check(amplitude >= 0.0 && amplitude.is_finite(), "data.amplitude", format!("must be non-negative, got {amplitude}"))?;
        Ok(DataSpec { kind: self.data_kind()?, amplitude, seed: d.seed, preparation: self.preparation()? })
    }

    pub fn amplitudes(&self) -> Result<Vec<f64>, CliError> {
        let a = need(&self.data_section()?.amplitudes, "data.amplitudes", self.experiment)?.clone();
        list(&a, "data.amplitudes")?;
        Ok(a)
    }

    pub fn integration(&self) -> Result<&'a IntegrationSection, CliError> {
        let i = need(&self.cfg.integration, "integration", self.experiment)?;
        positive(i.t_end, "integration.t_end")?;
        check(i.outputs >= 1, "integration.outputs", "must be at least 1")?;
        check(i.per_decade >= 1, "integration.per_decade", "must be at least 1")?;
        positive(i.speed_margin, "integration.speed_margin")?;
        if let Some(StepSize::Fixed(dt)) = i.dt {
            positive(dt, "integration.dt")?;
        }
        Ok(i)
    }

    pub fn fit(&self) -> Result<FitSection, CliError> {
        let f = self.cfg.fit.clone().unwrap_or_default();
        positive(f.tolerance, "fit.tolerance")?;
        if let Some([a, b]) = f.window {
            check(a >= 0.0 && b > a, "fit.window", format!("need 0 <= a < b, got [{a}, {b}]"))?;
        }
        Ok(f)
    }

    pub fn snapshots(&self) -> bool {
        self.cfg.output.as_ref().is_some_and(|o| o.snapshots)
    }

    pub fn relax(&self) -> Result<&'a RelaxSection, CliError> {
        let r = need(&self.cfg.relax, "relax", self.experiment)?;
        positive(r.reference_dt, "relax.reference_dt")?;
        positive(r.dt_factor, "relax.dt_factor")?;
        Ok(r)
    }

    pub fn scan(&self) -> Result<ScanSection, CliError> {
        let s = self.cfg.scan.clone().unwrap_or_default();
        check(s.decay_ratio > 0.0 && s.decay_ratio < 1.0, "scan.decay_ratio", format!("must lie in (0, 1), got {}", s.decay_ratio))?;
        Ok(s)
    }

    pub fn refine_dts(&self) -> Result<Option<Vec<f64>>, CliError> {
        let Some(dts) = self.cfg.monitor.as_ref().and_then(|m| m.refine_dts.clone()) else { return Ok(None) };
        list(&dts, "monitor.refine_dts")?;
        check(dts.len() >= 3, "monitor.refine_dts", format!("need at least 3 values, got {}", dts.len()))?;
        Ok(Some(dts))
    }

    pub fn smallness_variant(&self) -> SmallnessVariant {
        self.cfg.smallness.as_ref().map_or(SmallnessVariant::APriori, |s| s.variant)
    }

    pub fn profile(&self) -> Result<RadialProfile, CliError> {
        let d = need(&self.cfg.dw, "dw", self.experiment)?;
        let width = positive(d.width, "dw.width")?;
        check(d.amplitude.is_finite(), "dw.amplitude", "must be finite")?;
        Ok(match d.profile {
            ProfileName::Gaussian => {
                check(d.c2.is_none(), "dw.c2", "only used by gaussian-poly")?;
                RadialProfile::Gaussian { amplitude: d.amplitude, width }
            }
            ProfileName::GaussianPoly => {
                RadialProfile::GaussianPoly { amplitude: d.amplitude, width, c2: *need(&d.c2, "dw.c2", self.experiment)? }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_key_path() {
        let err = parse("[grid]\nn = 64\nlength = 8.0\nspacing = 1\n").unwrap_err();
        assert!(err.to_string().contains("grid"), "{err}");
        assert!(err.to_string().contains("spacing"), "{err}");
        let err = parse("[integration]\nt_end = \"long\"\n").unwrap_err();
        assert!(err.to_string().contains("integration.t_end"), "{err}");
    }

    #[test]
    fn step_size_forms() {
        let c = parse("[integration]\nt_end = 1.0\ndt = \"auto\"\n").unwrap();
        assert_eq!(c.integration.unwrap().dt, Some(StepSize::Auto(AutoStep::Auto)));
        let c = parse("[integration]\nt_end = 1.0\ndt = 0.01\n").unwrap();
        assert_eq!(c.integration.unwrap().dt, Some(StepSize::Fixed(0.01)));
        assert!(parse("[integration]\nt_end = 1.0\ndt = \"fast\"\n").is_err());
    }

    #[test]
    fn geometric_taus_required() {
        let c = parse("[params]\nmu = 1.0\ntaus = [0.1, 0.05, 0.02, 0.01]\n").unwrap();
        let r = Resolver::new(&c, Experiment::RelaxLimit).unwrap();
        assert!(r.geometric_taus().unwrap_err().to_string().contains("params.taus[2]"));
    }

    #[test]
    fn experiment_must_match() {
        let c = parse("experiment = \"simulate\"\n").unwrap();
        assert!(Resolver::new(&c, Experiment::Monitor).is_err());
    }
}
