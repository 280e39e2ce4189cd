use thiserror::Error;

/// Errors raised across the identification pipeline.
#[derive(Debug, Error)]
pub enum QipError {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("SS-DD does not describe an inclusion (specialness residual {residual:.3e})")]
    NotAnInclusion { residual: f64 },

    #[error("no witness exists: Cx = 0 but y != Ax")]
    NoWitness,

    #[error("infinite cone width: X_B is singular")]
    InfiniteWidth,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("point {index} has x = 0 and y != 0, which no degenerate inclusion contains")]
    InfeasiblePoint { index: usize },

    #[error("no strictly feasible starting point: {0}")]
    InfeasibleStart(String),

    #[error("matrix is not Hurwitz (max real eigenvalue {max_real:.3e})")]
    NotHurwitz { max_real: f64 },

    #[error("pole set is not closed under conjugation")]
    PoleSet,

    #[error("normal equations are singular")]
    SingularNormalEquations,

    #[error("sample {index} cannot be covered by scaling the covariance (x* Sigma_A x = 0)")]
    Unscalable { index: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QipError>;
