use crate::expr::ExprError;

/// Errors raised by the geometric operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bad split n = {n} for dimension {dim}")]
    BadSplit { n: usize, dim: usize },
    #[error("inconsistent perturbation: {0}")]
    InconsistentPerturbation(String),
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("singular Jacobian block (scaled |det| = {scaled_det:.3e})")]
    SingularJacobian { scaled_det: f64 },
    #[error("singularity at sample: {0}")]
    SingularityAtSample(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("load error: {0}")]
    Load(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl Error {
    /// True for failures caused by the evaluation point rather than the input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Expr(ExprError::Domain(_)) | Error::SingularJacobian { .. } | Error::SingularityAtSample(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
