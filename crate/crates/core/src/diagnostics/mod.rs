//! Functionals evaluated along trajectories.

pub mod battery;
pub mod energy;
pub mod functionals;
pub mod params;
pub mod record;
pub mod residual;

pub use battery::{BatteryConfig, NormRow};
pub use energy::{energy_em, energy_em_ns, gronwall_integrand};
pub use functionals::{
    gronwall_report, m_functional, m_functional_series, regularity_monitor, representation_residual, smallness_report, GronwallReport,
    RegularityReport, SmallnessItem, SmallnessReport, SmallnessVariant,
};
pub use params::AnalysisParams;
pub use record::{StateSample, TrajectoryRecord};
pub use residual::RepresentationTracker;
