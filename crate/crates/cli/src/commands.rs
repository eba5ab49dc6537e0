//! One function per subcommand.

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::Serialize;

use hnslab::diagnostics::{
    gronwall_report, regularity_monitor, smallness_report, AnalysisParams, BatteryConfig, GronwallReport, SmallnessVariant,
    TrajectoryRecord,
};
use hnslab::experiments::decay::{fit_window, hns_decay_checks, ns_decay_checks};
use hnslab::experiments::dw::DwVerifyConfig;
use hnslab::experiments::relax::{self, RelaxConfig};
use hnslab::experiments::scan::{self, ScanConfig};
use hnslab::experiments::{dw_verify, ExponentCheck};
use hnslab::hns::{hns_run_observed, make_initial_data, DataKind, DataSpec, HnsStepperConfig, RunOptions, Scheme};
use hnslab::ns::ns_run_observed;
use hnslab::rates::{fit_order, OrderFit};
use hnslab::schedule::{log_times, output_steps, uniform_times};
use hnslab::spectral::{sobolev_norm, sup_norm, Grid as GridT};
use hnslab::{Field, Grid};

use crate::config::{IntegrationSection, Model, Resolver, ScheduleKind, StepSize};
use crate::error::{CliError, Status};
use crate::output::{num, opt, write_norms, Artifacts};

type Outcome = Result<Status, CliError>;

fn make_grid(n: usize, length: f64) -> Result<Grid, CliError> {
    GridT::new(n, length).map_err(|e| CliError::config("grid", e.to_string()))
}

fn initial_data(grid: &Grid, spec: &DataSpec, mu: f64) -> Result<(Field, Field), CliError> {
    make_initial_data(grid, spec, mu).map_err(|e| CliError::config("data", e.to_string()))
}

/// Step size and output times of a single run.
#[derive(Clone, Debug, Serialize)]
struct Timing {
    dt: f64,
    scheme: Scheme,
    times: Vec<f64>,
}

fn timing(r: &Resolver, tau: f64, n: usize, length: f64, amplitude: f64) -> Result<Timing, CliError> {
    let i: &IntegrationSection = r.integration()?;
    let unit = match i.schedule {
        ScheduleKind::Uniform => i.t_end / i.outputs as f64,
        ScheduleKind::Log => i.t_end,
    };
    let dt = match i.dt {
        Some(StepSize::Fixed(dt)) => dt,
        Some(StepSize::Auto(_)) => HnsStepperConfig::auto(tau, n, length, i.speed_margin * amplitude, unit).dt,
        None => return Err(CliError::config("integration.dt", format!("required by {}", r.experiment.name()))),
    };
    let times = match i.schedule {
        ScheduleKind::Uniform => uniform_times(i.t_end, i.outputs),
        ScheduleKind::Log => log_times(i.t_end, i.per_decade, dt),
    };
    output_steps(&times, dt).map_err(|e| CliError::config("integration.dt", e.to_string()))?;
    Ok(Timing { dt, scheme: i.scheme, times })
}

fn stepper(t: &Timing, tau: f64) -> Result<HnsStepperConfig, CliError> {
    let cfg = HnsStepperConfig::new(t.dt).with_scheme(t.scheme);
    cfg.validate(tau).map_err(|e| CliError::config("integration.dt", e.to_string()))?;
    Ok(cfg)
}

fn failure(record: &TrajectoryRecord<f64>) -> Option<String> {
    record.failure.as_ref().map(|e| e.to_string())
}

fn status(complete: bool) -> Status {
    if complete {
        Status::Success
    } else {
        Status::Unstable
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum DecayFitSection {
    Fitted { window: (f64, f64), checks: Vec<ExponentCheck> },
    Unavailable { error: String },
}

fn decay_fit(r: &Resolver, record: &TrajectoryRecord<f64>, model: Model, analysis: &AnalysisParams) -> Result<DecayFitSection, CliError> {
    let fit = r.fit()?;
    let window = fit.window.map(|[a, b]| (a, b));
    let result = fit_window(record, window, &fit.criteria()).and_then(|w| {
        let checks = match model {
            Model::Ns => ns_decay_checks(record, w, fit.tolerance)?,
            Model::Hns => hns_decay_checks(record, w, analysis, fit.tolerance)?,
        };
        Ok((w, checks))
    });
    Ok(match result {
        Ok((window, checks)) => DecayFitSection::Fitted { window, checks },
        Err(e) => DecayFitSection::Unavailable { error: e.to_string() },
    })
}

#[derive(Serialize)]
struct SimulateResolved {
    model: Model,
    n: usize,
    length: f64,
    analysis: AnalysisParams,
    data: DataSpec,
    timing: Timing,
    snapshots: bool,
}

#[derive(Serialize)]
struct SimulateSummary {
    complete: bool,
    failure: Option<String>,
    outputs: usize,
    final_time: Option<f64>,
    /// Largest `L^2` distance to the exact decaying Taylor-Green solution.
    taylor_green_max_error: Option<f64>,
    final_u_l2: Option<f64>,
    final_u_inf: Option<f64>,
    decay_fit: DecayFitSection,
}

pub fn simulate(r: &Resolver, art: &Artifacts) -> Outcome {
    let model = r.model()?;
    let (n, length) = r.grid()?;
    let tau = r.tau()?;
    let analysis = r.analysis(tau)?;
    let data = r.data()?;
    let grid = make_grid(n, length)?;
    let (u0, u1) = initial_data(&grid, &data, analysis.mu)?;
    let t = timing(r, if model == Model::Hns { tau } else { 1.0 }, n, length, data.amplitude)?;
    let snapshots = r.snapshots();
    let resolved = SimulateResolved { model, n, length, analysis, data, timing: t.clone(), snapshots };
    let taylor_green = matches!(data.kind, DataKind::TaylorGreen);
    let k2 = (2.0 * std::f64::consts::PI / length).powi(2);
    let mut tg_errors = Vec::new();
    let mut index = 0usize;
    let mut io_error = None;
    let record = match model {
        Model::Ns => {
            let battery = BatteryConfig::new(analysis);
            ns_run_observed(&u0, analysis.mu, t.dt, &t.times, &battery, false, |s| {
                if taylor_green {
                    let exact = u0.scaled((-2.0 * analysis.mu * k2 * s.t).exp());
                    tg_errors.push(sobolev_norm(&(&s.v - &exact), 0)?);
                }
                if snapshots {
                    if let Err(e) = art.snapshot(&format!("u_{index:04}.snap"), &s.v, s.t) {
                        io_error = Some(e);
                    }
                }
                index += 1;
                Ok(())
            })?
        }
        Model::Hns => {
            let battery = BatteryConfig::new(analysis).with_lq();
            hns_run_observed(&u0, &u1, tau, analysis.mu, &stepper(&t, tau)?, &t.times, &battery, RunOptions::default(), |s| {
                if snapshots {
                    let written = art
                        .snapshot(&format!("u_{index:04}.snap"), &s.u, s.t)
                        .and_then(|_| art.snapshot(&format!("ut_{index:04}.snap"), &s.w, s.t));
                    if let Err(e) = written {
                        io_error = Some(e);
                    }
                }
                index += 1;
                Ok(())
            })?
        }
    };
    if let Some(e) = io_error {
        return Err(e);
    }
    let tg = (taylor_green && model == Model::Ns).then_some(tg_errors.as_slice());
    let hns_tau = (model == Model::Hns).then_some(tau);
    write_norms(&mut art.csv("norms.csv")?, &record.rows, hns_tau, tg)?;
    let last = record.rows.last();
    let summary = SimulateSummary {
        complete: record.complete,
        failure: failure(&record),
        outputs: record.rows.len(),
        final_time: last.map(|r| r.t),
        taylor_green_max_error: tg.map(|e| e.iter().fold(0.0, |m: f64, &x| m.max(x))),
        final_u_l2: last.map(|r| r.u_l2),
        final_u_inf: last.map(|r| r.u_inf),
        decay_fit: decay_fit(r, &record, model, &analysis)?,
    };
    art.report("summary.json", record.complete, &resolved, &summary)?;
    Ok(status(record.complete))
}

#[derive(Serialize)]
struct MonitorResolved {
    n: usize,
    length: f64,
    analysis: AnalysisParams,
    data: DataSpec,
    timing: Timing,
    refine_dts: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct Refinement {
    dts: Vec<f64>,
    residual_max: Vec<f64>,
    complete: Vec<bool>,
    order: Option<OrderFit>,
    /// Why no order was fitted.
    order_error: Option<String>,
}

#[derive(Serialize)]
struct MonitorSummary {
    complete: bool,
    failure: Option<String>,
    regularity_integral: f64,
    prior_integrals: [f64; 3],
    gronwall: GronwallReport,
    residual_max: f64,
    refinement: Option<Refinement>,
}

/// The zero solution satisfies the energy estimate with any constant, so an
/// identically zero record reports zeros instead of an undefined ratio.
fn gronwall_section(record: &TrajectoryRecord<f64>) -> Result<GronwallReport, CliError> {
    if record.rows.iter().all(|r| r.energy == 0.0 && r.gronwall == 0.0) {
        return Ok(GronwallReport { c_fit: 0.0, margin: 0.0, integral: 0.0, t_sup: 0.0 });
    }
    Ok(gronwall_report(record)?)
}

fn residual_max(record: &TrajectoryRecord<f64>) -> f64 {
    record.rows.iter().filter_map(|r| r.residual).fold(0.0, f64::max)
}

pub fn monitor(r: &Resolver, art: &Artifacts, pool: &ThreadPool) -> Outcome {
    if let Some(m) = r.cfg.model {
        if m != Model::Hns {
            return Err(CliError::config("model", "monitor runs the hyperbolic system only"));
        }
    }
    let (n, length) = r.grid()?;
    let tau = r.tau()?;
    let analysis = r.analysis(tau)?;
    let data = r.data()?;
    let grid = make_grid(n, length)?;
    let (u0, u1) = initial_data(&grid, &data, analysis.mu)?;
    let t = timing(r, tau, n, length, data.amplitude)?;
    let refine_dts = r.refine_dts()?;
    let battery = BatteryConfig::new(analysis).with_besov();
    let options = RunOptions { keep_states: false, track_representation: true };
    let run = |dt: f64| -> Result<TrajectoryRecord<f64>, CliError> {
        let timing = Timing { dt, ..t.clone() };
        output_steps(&timing.times, dt).map_err(|e| CliError::config("monitor.refine_dts", e.to_string()))?;
        Ok(hns_run_observed(&u0, &u1, tau, analysis.mu, &stepper(&timing, tau)?, &timing.times, &battery, options, |_| Ok(()))?)
    };
    let record = run(t.dt)?;
    let refinement = match &refine_dts {
        None => None,
        Some(dts) => {
            let records = pool.install(|| dts.par_iter().map(|&dt| run(dt)).collect::<Result<Vec<_>, _>>())?;
            let residual_max: Vec<f64> = records.iter().map(residual_max).collect();
            let complete: Vec<bool> = records.iter().map(|r| r.complete).collect();
            let (order, order_error) = match fit_order(dts, &residual_max) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Some(Refinement { dts: dts.clone(), residual_max, complete, order, order_error })
        }
    };
    let regularity = regularity_monitor(&record)?;
    let mut w = art.csv("monitor.csv")?;
    w.write_record(["t", "regularity_b", "regularity_cumulative", "gronwall", "energy", "residual"])?;
    for (i, row) in record.rows.iter().enumerate() {
        w.write_record([
            num(row.t),
            num(regularity.b[i]),
            num(regularity.cumulative[i]),
            num(row.gronwall),
            num(row.energy),
            opt(row.residual),
        ])?;
    }
    w.flush()?;
    let complete = record.complete && refinement.as_ref().is_none_or(|f| f.complete.iter().all(|&c| c));
    let summary = MonitorSummary {
        complete,
        failure: failure(&record),
        regularity_integral: regularity.integral,
        prior_integrals: regularity.prior_integrals,
        gronwall: gronwall_section(&record)?,
        residual_max: residual_max(&record),
        refinement,
    };
    let resolved = MonitorResolved { n, length, analysis, data, timing: t, refine_dts };
    art.report("monitor.json", complete, &resolved, &summary)?;
    Ok(status(complete))
}

#[derive(Serialize)]
struct RelaxSummary {
    report: relax::RelaxReport,
    min_u_order: f64,
    min_ut_order: f64,
    pass: bool,
}

pub fn relax_limit(r: &Resolver, art: &Artifacts, pool: &ThreadPool) -> Outcome {
    let (n, length) = r.grid()?;
    let taus = r.geometric_taus()?;
    let analysis = r.analysis(taus[0])?;
    let section = r.relax()?;
    let i = r.integration()?;
    let cfg = RelaxConfig {
        n,
        length,
        data: r.data()?,
        analysis,
        taus,
        dt_factor: section.dt_factor,
        scheme: i.scheme,
        reference_dt: section.reference_dt,
        t_end: i.t_end,
        outputs: i.outputs,
        exclude_unstable: section.exclude_unstable,
    };
    if i.dt.is_some() {
        return Err(CliError::config("integration.dt", "relax-limit steps with relax.dt_factor * tau and relax.reference_dt"));
    }
    let times = relax::output_times(&cfg);
    output_steps(&times, cfg.reference_dt).map_err(|e| CliError::config("relax.reference_dt", e.to_string()))?;
    for &tau in &cfg.taus {
        let dt = cfg.dt_factor * tau;
        output_steps(&times, dt).map_err(|e| CliError::config("relax.dt_factor", format!("tau = {tau}: {e}")))?;
        stepper(&Timing { dt, scheme: cfg.scheme, times: Vec::new() }, tau)
            .map_err(|e| CliError::config("relax.dt_factor", format!("tau = {tau}: {e}")))?;
    }
    initial_data(&make_grid(n, length)?, &cfg.data, analysis.mu)?;
    let reference = match relax::reference(&cfg) {
        Ok(reference) => reference,
        Err(e @ (hnslab::Error::Instability { .. } | hnslab::Error::Cfl { .. })) => {
            log::error!("Navier-Stokes reference failed: {e}");
            let summary = serde_json::json!({ "reference_failure": e.to_string() });
            art.report("relax.json", false, &cfg, &summary)?;
            return Ok(Status::Unstable);
        }
        Err(e) => return Err(e.into()),
    };
    let members = pool.install(|| cfg.taus.par_iter().map(|&tau| relax::member(&cfg, tau, &reference)).collect::<Result<Vec<_>, _>>())?;
    let report = relax::assemble(&cfg, members)?;
    let mut w = art.csv("relax.csv")?;
    w.write_record(["tau", "dt", "complete", "u_error", "ut_error", "failure"])?;
    for m in &report.members {
        w.write_record([
            num(m.tau),
            num(m.dt),
            m.complete.to_string(),
            num(m.u_error),
            num(m.ut_error),
            m.failure.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    let unstable = report.members.iter().any(|m| !m.complete);
    let pass = matches!((&report.u_order, &report.ut_order), (Some(u), Some(ut)) if u.order >= section.min_u_order && ut.order >= section.min_ut_order);
    let complete = !unstable;
    let summary = RelaxSummary { report, min_u_order: section.min_u_order, min_ut_order: section.min_ut_order, pass };
    art.report("relax.json", complete, &cfg, &summary)?;
    Ok(if unstable && !cfg.exclude_unstable {
        Status::Unstable
    } else if pass {
        Status::Success
    } else {
        Status::ToleranceFailure
    })
}

pub fn tau_scan(r: &Resolver, art: &Artifacts, pool: &ThreadPool) -> Outcome {
    let (n, length) = r.grid()?;
    let taus = r.taus()?;
    let analysis = r.analysis(taus[0])?;
    let i = r.integration()?;
    if let Some(StepSize::Fixed(_)) = i.dt {
        return Err(CliError::config("integration.dt", "tau-scan picks the step per cell; use \"auto\" or omit it"));
    }
    if i.schedule != ScheduleKind::Uniform {
        return Err(CliError::config("integration.schedule", "tau-scan uses the uniform schedule"));
    }
    let cfg = ScanConfig {
        n,
        length,
        kind: r.data_kind()?,
        seed: r.seed()?,
        preparation: r.preparation()?,
        analysis,
        taus,
        amplitudes: r.amplitudes()?,
        t_end: i.t_end,
        outputs: i.outputs,
        decay_ratio: r.scan()?.decay_ratio,
        speed_margin: i.speed_margin,
    };
    make_grid(n, length)?;
    let cells = scan::cells(&cfg);
    let results = pool.install(|| cells.par_iter().map(|&(tau, a)| scan::scan_cell(&cfg, tau, a)).collect::<Result<Vec<_>, _>>())?;
    let mut w = art.csv("tau_scan.csv")?;
    w.write_record(["tau", "amplitude", "dt", "outcome", "energy_ratio", "failure"])?;
    for c in &results {
        let outcome = serde_json::to_value(c.outcome)?.as_str().unwrap_or_default().to_string();
        w.write_record([num(c.tau), num(c.amplitude), num(c.dt), outcome, num(c.energy_ratio), c.failure.clone().unwrap_or_default()])?;
    }
    w.flush()?;
    art.report("tau_scan.json", true, &cfg, &results)?;
    Ok(Status::Success)
}

#[derive(Serialize)]
struct SmallnessResolved {
    n: usize,
    length: f64,
    analysis: AnalysisParams,
    data: DataSpec,
    variant: SmallnessVariant,
}

pub fn smallness(r: &Resolver, art: &Artifacts) -> Outcome {
    let (n, length) = r.grid()?;
    let tau = r.tau()?;
    let analysis = r.analysis(tau)?;
    let data = r.data()?;
    let variant = r.smallness_variant();
    let (u0, u1) = initial_data(&make_grid(n, length)?, &data, analysis.mu)?;
    let report = smallness_report(&u0, &u1, &analysis, variant)?;
    let mut w = art.csv("smallness.csv")?;
    w.write_record(["term", "value"])?;
    for item in &report.items {
        w.write_record([item.term.clone(), num(item.value)])?;
    }
    w.write_record(["total".to_string(), num(report.total)])?;
    w.flush()?;
    let resolved = SmallnessResolved { n, length, analysis, data, variant };
    log::info!("smallness total {:.6e} (peak speed {:.3e})", report.total, sup_norm(&u0));
    art.report("smallness.json", true, &resolved, &report)?;
    Ok(Status::Success)
}

pub fn dw_verify_cmd(r: &Resolver, art: &Artifacts) -> Outcome {
    let (n, length) = r.grid()?;
    let d = r.cfg.dw.as_ref().ok_or_else(|| CliError::config("dw", "required by dw-verify"))?;
    let base = DwVerifyConfig::default();
    let cfg = DwVerifyConfig {
        n,
        length,
        mu: r.mu()?,
        profile: r.profile()?,
        box_taus: d.box_taus.clone().unwrap_or(base.box_taus),
        box_times: d.box_times.clone().unwrap_or(base.box_times),
        box_tolerance: d.box_tolerance.unwrap_or(base.box_tolerance),
        rate_tau: d.rate_tau.unwrap_or(base.rate_tau),
        rate_times: d.rate_times.clone().unwrap_or(base.rate_times),
        rate_tolerance: d.rate_tolerance.unwrap_or(base.rate_tolerance),
        prefactor_taus: d.prefactor_taus.clone().unwrap_or(base.prefactor_taus),
        prefactor_time: d.prefactor_time.unwrap_or(base.prefactor_time),
        prefactor_tolerance: d.prefactor_tolerance.unwrap_or(base.prefactor_tolerance),
    };
    make_grid(n, length)?;
    let report = dw_verify(&cfg).map_err(|e| match e {
        hnslab::Error::InvalidParameter(m) | hnslab::Error::NotGeometric(m) => CliError::config("dw", m),
        e => e.into(),
    })?;
    let mut w = art.csv("dw_box.csv")?;
    w.write_record(["tau", "t", "box_norm", "oracle_norm", "rel_error", "in_window"])?;
    for b in &report.box_rows {
        w.write_record([num(b.tau), num(b.t), num(b.box_norm), num(b.oracle_norm), num(b.rel_error), b.in_window.to_string()])?;
    }
    w.flush()?;
    let mut w = art.csv("dw_rates.csv")?;
    w.write_record(["alpha_order", "j", "expected", "exponent", "r2", "pass"])?;
    for c in &report.rates {
        w.write_record([
            c.alpha_order.to_string(),
            c.j.to_string(),
            num(c.expected),
            num(c.fit.exponent),
            num(c.fit.r2),
            c.pass.to_string(),
        ])?;
    }
    w.flush()?;
    let mut w = art.csv("dw_prefactors.csv")?;
    w.write_record(["j", "bound_exponent", "order", "r2", "pass"])?;
    for c in &report.prefactors {
        w.write_record([c.j.to_string(), num(c.bound_exponent), num(c.fit.order), num(c.fit.r2), c.pass.to_string()])?;
    }
    w.flush()?;
    let pass = report.pass();
    art.report("dw_verify.json", true, &cfg, &serde_json::json!({ "pass": pass, "report": report }))?;
    Ok(if pass { Status::Success } else { Status::ToleranceFailure })
}
