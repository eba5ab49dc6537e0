use serde::{Deserialize, Serialize};

use super::params::AnalysisParams;
use super::record::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{sobolev_lebesgue_norm, sobolev_norm, Exponent, SpectralField};

/// Recorded representation residual at output time `t`.
pub fn representation_residual<T: Real>(traj: &TrajectoryRecord<T>, t: f64) -> Result<f64> {
    let row = traj.row_at(t).ok_or_else(|| Error::MissingData(format!("no output row at t = {t}")))?;
    row.residual.ok_or_else(|| Error::MissingData("representation accumulator was not tracked".into()))
}

/// Weighted sum inside the supremum defining `M(T)`, at one row.
fn m_terms(t: f64, v: [f64; 6], p: &AnalysisParams) -> f64 {
    let s = 1.0 + t;
    let q = p.q;
    let [u_q, ut_q, gu_q, u_2, ut_2, gu_2] = v;
    s.powf(1.0 - 2.0 / q) * u_q
        + s.powf(1.5 - 2.0 / q) * (p.tau * ut_q + gu_q)
        + s.powf(0.5 - p.eps) * u_2
        + s.powf(1.0 - p.eps) * (p.tau * ut_2 + gu_2)
}

/// Running supremum `M(t_i)` over the output times.
pub fn m_functional_series<T: Real>(traj: &TrajectoryRecord<T>, params: &AnalysisParams) -> Result<Vec<f64>> {
    let uq = traj.optional_column("u_m1q", |r| r.u_m1q)?;
    let utq = traj.optional_column("ut_m1q", |r| r.ut_m1q)?;
    let guq = traj.optional_column("grad_u_m1q", |r| r.grad_u_m1q)?;
    let mut sup = 0.0f64;
    Ok(traj
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            sup = sup.max(m_terms(r.t, [uq[i], utq[i], guq[i], r.u_m2, r.ut_m2, r.grad_u_m2], params));
            sup
        })
        .collect())
}

/// `M(T)` with `T` the last output time (0 for an empty record).
pub fn m_functional<T: Real>(traj: &TrajectoryRecord<T>, params: &AnalysisParams) -> Result<f64> {
    Ok(m_functional_series(traj, params)?.last().copied().unwrap_or(0.0))
}

fn cumulative_trapezoid(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(t.len());
    let mut acc = 0.0;
    for i in 0..t.len() {
        if i > 0 {
            acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
        }
        out.push(acc);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GronwallReport {
    /// `sup_t [log(E_m(t)/E_m(0))]_+ / int_0^t G`.
    pub c_fit: f64,
    /// `-max_t log(E_m(t)/E_m(0))`: non-negative when the energy never exceeds its initial value.
    pub margin: f64,
    /// `int_0^T G` over the record.
    pub integral: f64,
    /// Time at which the supremum defining `c_fit` is attained (0 if `c_fit = 0`).
    pub t_sup: f64,
}

/// Smallest constant `c` with `E_m(t) <= E_m(0) exp(c int_0^t G)` at every output time.
pub fn gronwall_report<T: Real>(traj: &TrajectoryRecord<T>) -> Result<GronwallReport> {
    let first = traj.rows.first().ok_or_else(|| Error::MissingData("empty trajectory".into()))?;
    if !(first.energy > 0.0) {
        return Err(Error::InvalidParameter("E_m(0) = 0: the Gronwall ratio is undefined".into()));
    }
    let t = traj.times();
    let integral = cumulative_trapezoid(&t, &traj.column(|r| r.gronwall));
    let (mut c_fit, mut t_sup, mut max_log) = (0.0f64, 0.0, f64::NEG_INFINITY);
    for (i, r) in traj.rows.iter().enumerate() {
        let log_ratio = (r.energy / first.energy).ln();
        max_log = max_log.max(log_ratio);
        if log_ratio > 0.0 && integral[i] > 0.0 && log_ratio / integral[i] > c_fit {
            c_fit = log_ratio / integral[i];
            t_sup = r.t;
        }
    }
    Ok(GronwallReport { c_fit, margin: 0.0 - max_log, integral: *integral.last().unwrap(), t_sup })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub times: Vec<f64>,
    /// `b(t) = ||rot u(t)||_{B^0_{inf,inf}}`.
    pub b: Vec<f64>,
    /// Running trapezoid integral of `b`.
    pub cumulative: Vec<f64>,
    pub integral: f64,
    /// Integrals of the Besov norms of `u`, `grad u` and `u_t`.
    pub prior_integrals: [f64; 3],
}

pub fn regularity_monitor<T: Real>(traj: &TrajectoryRecord<T>) -> Result<RegularityReport> {
    let times = traj.times();
    let b = traj.optional_column("besov_rot", |r| r.besov_rot)?;
    let cumulative = cumulative_trapezoid(&times, &b);
    let total = |name: &str, f: fn(&super::NormRow) -> Option<f64>| -> Result<f64> {
        Ok(cumulative_trapezoid(&times, &traj.optional_column(name, f)?).last().copied().unwrap_or(0.0))
    };
    let prior_integrals =
        [total("besov_u", |r| r.besov_u)?, total("besov_grad_u", |r| r.besov_grad_u)?, total("besov_ut", |r| r.besov_ut)?];
    Ok(RegularityReport { integral: cumulative.last().copied().unwrap_or(0.0), times, b, cumulative, prior_integrals })
}

/// Index convention of the smallness sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmallnessVariant {
    /// `W^{m1+m0+2,p}` and `W^{m1+m0+1,p}` terms.
    APriori,
    /// `W^{m1+n+4,p}` and `W^{m1+n+3,p}` terms with `n = 2`.
    Global,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallnessItem {
    pub term: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallnessReport {
    pub items: Vec<SmallnessItem>,
    pub total: f64,
}

/// Itemized initial-data norm sum of the small-data theorems.
pub fn smallness_report<T: Real>(
    u0: &SpectralField<T>,
    u1: &SpectralField<T>,
    params: &AnalysisParams,
    variant: SmallnessVariant,
) -> Result<SmallnessReport> {
    params.validate()?;
    let p = params.p();
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} < 1")));
    }
    let (m, m1, tau) = (params.m, params.m1, params.tau);
    let (k0, k1) = match variant {
        SmallnessVariant::APriori => (m1 + params.m0() + 2, m1 + params.m0() + 1),
        SmallnessVariant::Global => (m1 + 2 + 4, m1 + 2 + 3),
    };
    let r = Exponent::Finite(T::lit(1.0 / (1.0 - params.eps)));
    let pe = Exponent::Finite(T::lit(p));
    let f = |x: T| x.to_f64_lossy();
    let r_label = format!("{:.6}", 1.0 / (1.0 - params.eps));
    let p_label = format!("{p:.6}");
    let items = vec![
        SmallnessItem { term: format!("|u0|_{{{},2}}", m + 4), value: f(sobolev_norm(u0, m + 4)?) },
        SmallnessItem { term: format!("tau |u1|_{{{},2}}", m + 3), value: tau * f(sobolev_norm(u1, m + 3)?) },
        SmallnessItem { term: format!("|u0|_{r_label}"), value: f(sobolev_lebesgue_norm(u0, 0, r)?) },
        SmallnessItem { term: format!("tau |u1|_{r_label}"), value: tau * f(sobolev_lebesgue_norm(u1, 0, r)?) },
        SmallnessItem { term: format!("|u0|_{{{k0},{p_label}}}"), value: f(sobolev_lebesgue_norm(u0, k0, pe)?) },
        SmallnessItem { term: format!("tau |u1|_{{{k1},{p_label}}}"), value: tau * f(sobolev_lebesgue_norm(u1, k1, pe)?) },
    ];
    let total = items.iter().map(|i| i.value).sum();
    Ok(SmallnessReport { items, total })
}
