use thiserror::Error;

/// Errors raised by the separation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian: ‖M − M†‖_F = {deviation:.3e} exceeds {allowed:.3e}")]
    NotHermitian { deviation: f64, allowed: f64 },
    #[error("matrix is not unitary: ‖U†U − I‖_o = {deviation:.3e} exceeds {allowed:.3e}")]
    NotUnitary { deviation: f64, allowed: f64 },
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension {requested} exceeds the configured maximum {max}")]
    SizeLimit { requested: usize, max: usize },
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("leading Schmidt factor is singular (smallest/largest singular value {ratio:.3e}); polar projection is ill-defined")]
    DegenerateFactor { ratio: f64 },
    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
