use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Non-positive pivot during factorization; usually insufficient supports.
    #[error("singular system: non-positive pivot {pivot:e} at equation {row}")]
    SingularSystem { row: usize, pivot: f64 },

    #[error("equilibrium residual {0:e} exceeds tolerance")]
    ResidualTooLarge(f64),

    #[error("degenerate theta {0:e} in the dual algebraic equation")]
    DegenerateTheta(f64),

    #[error("instance too large for enumeration: n = {0} > 25")]
    TooLarge(usize),

    #[error("knapsack solution has not converged to a binary point")]
    NotConverged,

    #[error("optimality-criteria bisection failed: {0}")]
    BisectionFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
