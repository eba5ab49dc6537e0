//! Functionals along trajectories: closed forms, trivial cases and the archived smallness values.

use std::f64::consts::PI;
use std::path::PathBuf;

use hnslab::diagnostics::{
    energy_em_ns, gronwall_report, m_functional, m_functional_series, regularity_monitor, representation_residual, smallness_report,
    AnalysisParams, BatteryConfig, SmallnessReport, SmallnessVariant, TrajectoryRecord,
};
use hnslab::hns::{hns_run, make_initial_data, well_prepared_slope, DataKind, DataSpec, HnsStepperConfig, Preparation, RunOptions};
use hnslab::ns::NsState;
use hnslab::schedule::uniform_times;
use hnslab::spectral::{Grid, SpectralField, BESOV_PARTITION_BOUND};

fn params(tau: f64) -> AnalysisParams {
    AnalysisParams { tau, ..AnalysisParams::default() }
}

fn random_data(grid: &Grid<f64>, amplitude: f64) -> (SpectralField<f64>, SpectralField<f64>) {
    let spec = DataSpec { kind: DataKind::LocalizedRandom { width: 1.0 }, amplitude, seed: 5, preparation: Preparation::WellPrepared };
    make_initial_data(grid, &spec, 1.0).unwrap()
}

fn run(
    u0: &SpectralField<f64>,
    u1: &SpectralField<f64>,
    p: &AnalysisParams,
    battery: BatteryConfig,
    dt: f64,
    times: &[f64],
) -> TrajectoryRecord<f64> {
    let options = RunOptions { keep_states: false, track_representation: true };
    let rec = hns_run(u0, u1, p.tau, p.mu, &HnsStepperConfig::new(dt), times, &battery, options).unwrap();
    assert!(rec.complete);
    rec
}

fn taylor_green(grid: &Grid<f64>) -> SpectralField<f64> {
    SpectralField::from_fn_vector(grid, |x, y| (x.sin() * y.cos(), -x.cos() * y.sin())).mark_solenoidal().unwrap()
}

#[test]
fn zero_trajectory() {
    let g = Grid::new(16, 8.0).unwrap();
    let z = SpectralField::zeros(&g, 2).mark_solenoidal().unwrap();
    let p = params(0.1);
    let rec = run(&z, &z, &p, BatteryConfig::new(p).with_lq().with_besov(), 0.01, &uniform_times(0.1, 2));
    assert_eq!(m_functional(&rec, &p).unwrap(), 0.0);
    assert_eq!(representation_residual(&rec, 0.1).unwrap(), 0.0);
    let reg = regularity_monitor(&rec).unwrap();
    assert!(reg.b.iter().all(|&b| b == 0.0) && reg.integral == 0.0 && reg.prior_integrals == [0.0; 3]);
    assert!(gronwall_report(&rec).is_err());
    let s = smallness_report(&z, &z, &p, SmallnessVariant::APriori).unwrap();
    assert_eq!(s.total, 0.0);
}

#[test]
fn m_functional_at_initial_time_is_the_plain_sum() {
    let g = Grid::new(32, 8.0).unwrap();
    let (u0, u1) = random_data(&g, 0.5);
    let p = params(0.2);
    let rec = run(&u0, &u1, &p, BatteryConfig::new(p).with_lq(), 0.01, &[0.0]);
    let r = &rec.rows[0];
    let expect = r.u_m1q.unwrap() + p.tau * r.ut_m1q.unwrap() + r.grad_u_m1q.unwrap() + r.u_m2 + p.tau * r.ut_m2 + r.grad_u_m2;
    assert!((m_functional(&rec, &p).unwrap() - expect).abs() <= 1e-12 * expect);
    let without_lq = run(&u0, &u1, &p, BatteryConfig::new(p), 0.01, &[0.0]);
    assert!(m_functional(&without_lq, &p).is_err());
}

#[test]
fn m_functional_plateaus_for_small_data() {
    let g = Grid::new(32, 16.0).unwrap();
    let (u0, u1) = random_data(&g, 0.05);
    let p = params(0.1);
    let battery = BatteryConfig::new(p).with_lq();
    let coarse = run(&u0, &u1, &p, battery.clone(), 0.02, &uniform_times(8.0, 40));
    let series = m_functional_series(&coarse, &p).unwrap();
    let (mid, last) = (series[20], series[40]);
    assert!(last / mid <= 1.05, "M(T) ratio {}", last / mid);
    let fine = run(&u0, &u1, &p, battery, 0.02, &uniform_times(8.0, 80));
    let m_fine = m_functional(&fine, &p).unwrap();
    assert!((m_fine - last).abs() / last < 0.01);
}

#[test]
fn ns_energy_of_taylor_green_decays_at_rate_four_mu() {
    let g = Grid::new(32, 2.0 * PI).unwrap();
    let mu = 0.3;
    let e = |t: f64| {
        let v = taylor_green(&g).scaled((-2.0 * mu * t).exp());
        energy_em_ns(&NsState::new(v, t, mu).unwrap(), 1, 0.1)
    };
    let rate = (e(0.0) / e(1.0)).ln();
    assert!((rate / (4.0 * mu) - 1.0).abs() < 0.01);
}

#[test]
fn representation_residual_vanishes_at_start() {
    let g = Grid::new(32, 8.0).unwrap();
    let (u0, u1) = random_data(&g, 1.0);
    let p = params(0.1);
    let rec = run(&u0, &u1, &p, BatteryConfig::new(p), 0.01, &uniform_times(0.5, 5));
    assert!(representation_residual(&rec, 0.0).unwrap() <= 1e-12);
    assert!(representation_residual(&rec, 0.5).unwrap().is_finite());
    assert!(representation_residual(&rec, 0.25).is_err());
    let untracked =
        hns_run(&u0, &u1, p.tau, p.mu, &HnsStepperConfig::new(0.01), &[0.0, 0.5], &BatteryConfig::new(p), RunOptions::default()).unwrap();
    assert!(representation_residual(&untracked, 0.5).is_err());
}

#[test]
fn regularity_monitor_on_taylor_green() {
    let g = Grid::new(16, 2.0 * PI).unwrap();
    let (tau, mu) = (1e-3, 1.0);
    let u0 = taylor_green(&g);
    let u1 = well_prepared_slope(&u0, mu);
    let p = AnalysisParams { tau, mu, ..AnalysisParams::default() };
    let rec = run(&u0, &u1, &p, BatteryConfig::new(p).with_besov(), 5e-4, &uniform_times(1.0, 10));
    let reg = regularity_monitor(&rec).unwrap();
    for (t, b) in reg.times.iter().zip(&reg.b) {
        let ratio = b / reg.b[0] * (2.0 * mu * t).exp();
        assert!((ratio - 1.0).abs() < 10.0 * tau, "t = {t}: {ratio}");
    }
    assert!(reg.integral.is_finite() && reg.integral > 0.0);
    assert!(reg.cumulative.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn besov_integrand_is_bounded_by_the_sup_norm() {
    let g = Grid::new(32, 8.0).unwrap();
    let (u0, u1) = random_data(&g, 2.0);
    let p = params(0.1);
    let rec = run(&u0, &u1, &p, BatteryConfig::new(p).with_besov(), 0.005, &uniform_times(0.5, 5));
    for r in &rec.rows {
        assert!(r.besov_rot.unwrap() <= BESOV_PARTITION_BOUND * r.rot_inf);
    }
}

#[test]
fn linear_gronwall_constant_is_zero() {
    let g = Grid::new(32, 8.0).unwrap();
    let (u0, u1) = random_data(&g, 1e-6);
    let p = params(0.1);
    let rec = run(&u0, &u1, &p, BatteryConfig::new(p), 0.01, &uniform_times(1.0, 20));
    let report = gronwall_report(&rec).unwrap();
    assert_eq!(report.c_fit, 0.0);
    assert!(report.margin >= 0.0);
}

#[test]
fn smallness_scales_linearly() {
    let g = Grid::new(32, 8.0).unwrap();
    let (u0, u1) = random_data(&g, 0.3);
    let p = params(0.1);
    for variant in [SmallnessVariant::APriori, SmallnessVariant::Global] {
        let base = smallness_report(&u0, &u1, &p, variant).unwrap();
        let scaled = smallness_report(&u0.scaled(3.0), &u1.scaled(3.0), &p, variant).unwrap();
        assert!((scaled.total - 3.0 * base.total).abs() <= 1e-12 * scaled.total);
    }
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/smallness.json")
}

/// Localized random data of amplitude 0.1; set `HNSLAB_BLESS=1` to rewrite the archive.
#[test]
fn smallness_matches_archive() {
    let g = Grid::new(64, 16.0).unwrap();
    let spec = DataSpec { kind: DataKind::LocalizedRandom { width: 1.5 }, amplitude: 0.1, seed: 1, preparation: Preparation::WellPrepared };
    let (u0, u1) = make_initial_data(&g, &spec, 1.0).unwrap();
    let report = smallness_report(&u0, &u1, &params(0.1), SmallnessVariant::APriori).unwrap();
    if std::env::var_os("HNSLAB_BLESS").is_some() {
        std::fs::write(golden_path(), serde_json::to_string_pretty(&report).unwrap() + "\n").unwrap();
    }
    let golden: SmallnessReport = serde_json::from_str(&std::fs::read_to_string(golden_path()).unwrap()).unwrap();
    assert_eq!(report.items.len(), golden.items.len());
    for (a, b) in report.items.iter().zip(&golden.items) {
        assert_eq!(a.term, b.term);
        assert!((a.value - b.value).abs() <= 1e-9 * b.value, "{}: {} vs {}", a.term, a.value, b.value);
    }
}
