use thiserror::Error;

/// Errors raised by the fractional operators, solvers and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order {0} outside {1}")]
    InvalidOrder(f64, &'static str),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("non-finite value at node {node}")]
    NonFinite { node: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("factored quantity has no pairs")]
    EmptyFactors,

    #[error("unsupported transformation: {0}")]
    UnsupportedTransformation(String),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("singular Jacobian at grid node {node} (unknown {unknown})")]
    SingularJacobian { node: usize, unknown: usize },

    #[error("extremal is not converged")]
    Unconverged,

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("unknown parameter `{key}` for problem `{problem}`")]
    UnknownParameter { problem: String, key: String },
}

pub type Result<T> = std::result::Result<T, Error>;
