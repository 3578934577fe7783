use thiserror::Error;

/// Errors produced while building machines, states and reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CloneError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("gram matrix is not realizable: eigenvalue {min_eigenvalue:e} below -{tol:e}")]
    NotRealizable { min_eigenvalue: f64, tol: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("outside the domain of the closed form: {0}")]
    Domain(String),

    #[error("coefficient constraint violated (residual {residual:e})")]
    Constraint { residual: f64 },

    #[error("no eta pair satisfies the constraint: required {required}, achievable at most {achievable}")]
    Infeasible { required: f64, achievable: f64 },

    #[error("lambda must be non-zero for the optimum to exist")]
    DivisionDomain,

    #[error("xi and xi' coincide; the hybrid reduces to a single machine")]
    Degenerate,
}

pub type Result<T> = std::result::Result<T, CloneError>;
