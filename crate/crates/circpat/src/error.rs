use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid complex: {}", .0.join("; "))]
    InvalidComplex(Vec<String>),
    #[error("invalid angle data: {}", .0.join("; "))]
    InvalidAngles(Vec<String>),
    #[error("solver hit the iteration limit ({iterations}) with gradient norm {grad_norm:e}")]
    MaxIterations { iterations: usize, grad_norm: f64 },
    #[error("line search failed at iteration {iteration} (gradient norm {grad_norm:e})")]
    LineSearchFailure { iteration: usize, grad_norm: f64 },
    #[error("starting point is not strictly admissible")]
    InadmissibleStart,
    #[error("no strictly admissible extension of the boundary data was found")]
    InadmissibleBoundary,
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
    #[error("closedness residual {residual:e} exceeds threshold {threshold:e}")]
    ClosednessFailure { residual: f64, threshold: f64 },
    #[error("need at least {need} samples, got {have}")]
    InsufficientSamples { have: usize, need: usize },
    #[error("layout does not fit inside the unit disk after rescaling")]
    LayoutOutsideDisk,
    #[error("unsupported mesh family `{0}`")]
    UnsupportedFamily(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the nonlinear or linear solvers.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::MaxIterations { .. }
                | Error::LineSearchFailure { .. }
                | Error::InadmissibleStart
                | Error::InadmissibleBoundary
                | Error::LinearSolve(_)
                | Error::ClosednessFailure { .. }
        )
    }

    /// True for rejected input data.
    pub fn is_validation_failure(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::InvalidComplex(_)
                | Error::InvalidAngles(_)
                | Error::InsufficientSamples { .. }
                | Error::LayoutOutsideDisk
                | Error::UnsupportedFamily(_)
                | Error::InvalidSpec(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
