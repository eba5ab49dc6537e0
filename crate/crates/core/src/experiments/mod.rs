//! Reusable experiment drivers shared by the command-line runner and the
//! acceptance tests.

pub mod decay;
pub mod dw;
pub mod gronwall;
pub mod relax;
pub mod scan;

pub use decay::{hns_decay, ns_decay, DecayConfig, DecayOutcome, DecayReport, ExponentCheck, Target};
pub use dw::{dw_verify, DwReport, DwVerifyConfig};
pub use gronwall::{gronwall_suite, GronwallCase, GronwallComparison, GronwallSuiteConfig};
pub use relax::{relax_limit, RelaxConfig, RelaxMember, RelaxReport};
pub use scan::{scan_cell, tau_scan, CellOutcome, ScanCell, ScanConfig};
