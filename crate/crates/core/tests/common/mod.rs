//! Randomised invariant checks shared by the property tests and the acceptance run.
#![allow(dead_code)]

use hnslab::diagnostics::{energy_em, m_functional, m_functional_series, AnalysisParams, BatteryConfig};
use hnslab::hns::{hns_run, make_initial_data, DataKind, DataSpec, HnsState, HnsStepperConfig, Preparation, RunOptions};
use hnslab::spectral::{
    besov_b0infinf, derivative, inner_product, lebesgue_norm, leray_project, nonlinearity, sobolev_norm, sup_norm, Exponent, Grid,
    MultiIndex, SpectralField, BESOV_PARTITION_BOUND,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEEDS: u64 = 100;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random real field with `components` components on an `n x n` grid of random side.
pub fn random_field(rng: &mut ChaCha8Rng, n: usize, components: usize) -> SpectralField<f64> {
    let grid = Grid::new(n, rng.gen_range(1.0..20.0)).unwrap();
    random_on(rng, &grid, components)
}

pub fn random_on(rng: &mut ChaCha8Rng, grid: &Grid<f64>, components: usize) -> SpectralField<f64> {
    let len = grid.len();
    let samples: Vec<Vec<f64>> = (0..components).map(|_| (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    SpectralField::from_physical(grid, &samples).unwrap()
}

fn pick_n(rng: &mut ChaCha8Rng) -> usize {
    [16usize, 20, 32, 48][rng.gen_range(0..4)]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// `P P f = P f` and `<P f, g> = <f, P g>`; returns the worse relative defect.
pub fn leray_defect(seed: u64) -> f64 {
    let mut r = rng(seed);
    let n = pick_n(&mut r);
    let f = random_field(&mut r, n, 2);
    let g = random_on(&mut r, f.grid(), 2);
    let pf = leray_project(&f).unwrap();
    let ppf = leray_project(&pf).unwrap();
    let idem = sobolev_norm(&(&ppf - &pf), 0).unwrap() / sobolev_norm(&f, 0).unwrap();
    let a = inner_product(&pf, &g);
    let b = inner_product(&f, &leray_project(&g).unwrap());
    let scale = sobolev_norm(&f, 0).unwrap() * sobolev_norm(&g, 0).unwrap();
    idem.max((a - b).abs() / scale)
}

/// Spectral `L^2` norm against grid quadrature.
pub fn parseval_defect(seed: u64) -> f64 {
    let mut r = rng(seed);
    let n = pick_n(&mut r);
    let c = r.gen_range(1..=2);
    let f = random_field(&mut r, n, c);
    rel(sobolev_norm(&f, 0).unwrap(), lebesgue_norm(&f, Exponent::Finite(2.0)).unwrap())
}

/// Physical -> spectral -> physical, and conjugate symmetry of the coefficients.
pub fn roundtrip_defect(seed: u64) -> f64 {
    let mut r = rng(seed);
    let n = pick_n(&mut r);
    let f = random_field(&mut r, n, 2);
    let samples = f.to_physical();
    let back = SpectralField::from_physical(f.grid(), &samples).unwrap().to_physical();
    let scale = samples.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = samples.iter().flatten().zip(back.iter().flatten()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    (err / scale).max(f.hermitian_defect())
}

fn random_state(r: &mut ChaCha8Rng, n: usize) -> HnsState<f64> {
    let grid = Grid::new(n, 16.0).unwrap();
    let spec = DataSpec {
        kind: DataKind::LocalizedRandom { width: 2.0 },
        amplitude: r.gen_range(0.1..2.0),
        seed: r.gen(),
        preparation: Preparation::Independent { amplitude: r.gen_range(0.0..2.0), seed: r.gen() },
    };
    let (u, w) = make_initial_data(&grid, &spec, 1.0).unwrap();
    HnsState::new(u, w, 0.0, r.gen_range(0.01..1.0), r.gen_range(0.1..2.0)).unwrap()
}

/// `E_m(s x) = s^2 E_m(x)`: exact for powers of two, to rounding otherwise.
pub fn energy_scaling_defect(seed: u64) -> f64 {
    let mut r = rng(seed);
    let s0 = random_state(&mut r, 16);
    let m = r.gen_range(0..4);
    let e = energy_em(&s0, m, 0.25);
    let scaled = |s: f64| HnsState::new(s0.u.scaled(s), s0.w.scaled(s), 0.0, s0.tau, s0.mu).unwrap();
    let k = r.gen_range(-4..5);
    let two = 2f64.powi(k);
    let exact = energy_em(&scaled(two), m, 0.25);
    if exact != two * two * e {
        return f64::INFINITY;
    }
    let s = r.gen_range(-3.0..3.0);
    rel(energy_em(&scaled(s), m, 0.25), s * s * e)
}

/// `M(T)` never decreases along a run and equals the supremum over the prefix.
pub fn m_monotone(seed: u64) -> bool {
    let mut r = rng(seed);
    let s0 = random_state(&mut r, 16);
    let params = AnalysisParams { tau: s0.tau, mu: s0.mu, ..AnalysisParams::default() };
    let battery = BatteryConfig::new(params).with_lq();
    let dt = 0.5 * s0.tau.min(0.1);
    let times: Vec<f64> = (0..6).map(|i| i as f64 * 4.0 * dt).collect();
    let rec = hns_run(&s0.u, &s0.w, s0.tau, s0.mu, &HnsStepperConfig::new(dt), &times, &battery, RunOptions::default()).unwrap();
    let series = m_functional_series(&rec, &params).unwrap();
    let monotone = series.windows(2).all(|w| w[1] >= w[0]);
    let mut prefix = rec.clone();
    prefix.rows.truncate(3);
    monotone && m_functional(&prefix, &params).unwrap() == series[2]
}

/// `||f||_{B^0_inf,inf} / ||f||_inf`, to be at most the partition bound.
pub fn besov_ratio(seed: u64) -> f64 {
    let mut r = rng(seed);
    let n = pick_n(&mut r);
    let c = r.gen_range(1..=2);
    let f = random_field(&mut r, n, c);
    besov_b0infinf(&f) / sup_norm(&f)
}

pub fn besov_bound() -> f64 {
    BESOV_PARTITION_BOUND
}

/// Relative divergence of the projected nonlinearity for random solenoidal `u`, `w`.
pub fn nonlinearity_divergence(seed: u64) -> f64 {
    let mut r = rng(seed);
    let n = pick_n(&mut r);
    let f = random_field(&mut r, n, 2);
    let u = leray_project(&f.dealiased()).unwrap();
    let w = leray_project(&random_on(&mut r, f.grid(), 2).dealiased()).unwrap();
    let tau = r.gen_range(0.0..1.0);
    nonlinearity(&u, &w, tau).unwrap().divergence_defect()
}

/// `d^alpha P f = P d^alpha f`.
pub fn derivative_leray_defect(seed: u64) -> f64 {
    let mut r = rng(seed);
    let n = pick_n(&mut r);
    let f = random_field(&mut r, n, 2);
    let alpha = MultiIndex(r.gen_range(0..3), r.gen_range(0..3));
    let a = derivative(&leray_project(&f).unwrap(), alpha);
    let b = leray_project(&derivative(&f, alpha)).unwrap();
    let scale = sobolev_norm(&a, 0).unwrap().max(f64::MIN_POSITIVE);
    sobolev_norm(&(&a - &b), 0).unwrap() / scale
}
