use thiserror::Error;

/// Errors produced by grid operations, solvers and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("insufficient stencil: {0}")]
    InsufficientStencil(String),
    #[error("operation requires a periodic grid with an all-valid mask")]
    NotPeriodic,
    #[error("unknown catalog id `{0}`")]
    UnknownField(String),
    #[error("unknown reference solution `{1}` for equation `{0}`")]
    UnknownSolution(String, String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("empty sample: no valid points")]
    EmptySample,
    #[error("no elliptic points: {0}")]
    AllDegenerate(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("coefficient is not radially symmetric: {0}")]
    NotRadial(String),
    #[error("coefficient bound violated: {0}")]
    CoefficientBound(String),
    #[error("iteration diverged or failed to converge after {0} steps")]
    Diverged(usize),
    #[error("not homeomorphic on grid: {0}")]
    NotHomeomorphic(String),
    #[error("inversion failed: {0}")]
    InversionFailed(String),
    #[error("factorization failed: {0}")]
    FactorizationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
