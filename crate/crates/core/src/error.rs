use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("expected {expected} component(s), found {found}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("field is not solenoidal (relative divergence {0:.3e})")]
    NotSolenoidal(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("CFL violation: dt*|u|_inf*N/L = {courant:.3} exceeds {limit} at t = {time}")]
    Cfl { courant: f64, limit: f64, time: f64 },
    #[error("instability at t = {time} (tau = {tau}, dt = {dt}, N = {n})")]
    Instability { time: f64, tau: f64, dt: f64, n: usize },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("non-positive value {value:.3e} at index {index}")]
    NonPositive { index: usize, value: f64 },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("parameter sequence is not geometric: {0}")]
    NotGeometric(String),
    #[error("window too short ({0}); increase the box length L")]
    WindowTooShort(String),
    #[error("missing trajectory data: {0}")]
    MissingData(String),
    #[error("snapshot format: {0}")]
    Snapshot(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
