use thiserror::Error;

/// Errors raised by the geometric and numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({z1}, {z2}) lies on or outside the unit circle")]
    OutsideDisc { z1: f64, z2: f64 },

    #[error("vector is not future timelike: ({0}, {1}, {2})")]
    NotFutureTimelike(f64, f64, f64),

    #[error("degenerate geodesic: endpoints {theta1} and {theta2} coincide")]
    DegenerateGeodesic { theta1: f64, theta2: f64 },

    #[error("point lies on a leaf (|<x, sigma>| = {0:e})")]
    OnLeaf(f64),

    #[error("not a null frame: {0}")]
    NotNullFrame(String),

    #[error("invalid lamination: {0}")]
    InvalidLamination(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no data at ({z1}, {z2}) for the finite-difference stencil")]
    Stencil { z1: f64, z2: f64 },

    #[error("extrapolation diverged: {0}")]
    Divergent(String),

    #[error("point ({z1}, {z2}) is not a grid node")]
    NotANode { z1: f64, z2: f64 },

    #[error("non-positive Hessian determinant {det:e} at ({z1}, {z2})")]
    Degenerate { z1: f64, z2: f64, det: f64 },

    #[error("non-positive shape operator eigenvalue {0:e}")]
    NotConvex(f64),

    #[error("parameter {s} outside the domain s <= {cap} of the barrier")]
    BarrierDomain { s: f64, cap: f64 },

    #[error("chart inversion failed at ({z1}, {z2})")]
    ChartInversion { z1: f64, z2: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("newton did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64, trace: Vec<IterationLog> },

    #[error("linear solve failed: zero pivot at row {0}")]
    SingularPivot(usize),

    #[error("i/o error: {0}")]
    Io(String),
}

/// One line of the Newton convergence log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationLog {
    pub iteration: usize,
    pub residual: f64,
    pub damping: f64,
    pub monotone: bool,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
