use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the pipeline.
///
/// [`Error::category`] groups them for callers that only need to tell
/// configuration, assembly and solver failures apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("unsupported mesh: {0}")]
    UnsupportedMesh(String),

    #[error("singular interaction region at vertex {vertex}: {reason}")]
    Assembly { vertex: usize, reason: String },

    #[error("invalid permeability in cell {cell}: {reason}")]
    Permeability { cell: usize, reason: String },

    #[error("interface mismatch on interface {interface}: {reason}")]
    InterfaceMismatch { interface: usize, reason: String },

    #[error(
        "mortar condition violated on interface {interface}: sigma_min = {sigma:.3e}; coarsen the mortar grid"
    )]
    MortarCondition { interface: usize, sigma: f64 },

    #[error("coarse operator B B^T is rank deficient (pivot {pivot:.3e}); the mortar space cannot carry net subdomain fluxes")]
    CoarseRankDeficient { pivot: f64 },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{method} did not converge in {iterations} iterations (last residual {last:.3e})")]
    NotConverged {
        method: &'static str,
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("conjugate gradient breakdown at iteration {iteration}: curvature {curvature:.3e}")]
    Breakdown {
        iteration: usize,
        curvature: f64,
        iterate: Vec<f64>,
    },

    #[error("compatibility violated: {0}")]
    Compatibility(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for exit codes and reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Assembly,
    Solver,
    Io,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse { .. } | Error::InvalidConfig(_) | Error::InvalidDecomposition(_) => ErrorCategory::Config,
            Error::InvalidGeometry(_)
            | Error::UnsupportedMesh(_)
            | Error::Assembly { .. }
            | Error::Permeability { .. }
            | Error::InterfaceMismatch { .. }
            | Error::MortarCondition { .. }
            | Error::CoarseRankDeficient { .. }
            | Error::Dimension(_) => ErrorCategory::Assembly,
            Error::Factorization(_)
            | Error::NotConverged { .. }
            | Error::Breakdown { .. }
            | Error::Compatibility(_) => ErrorCategory::Solver,
            Error::Io(_) => ErrorCategory::Io,
        }
    }
}
