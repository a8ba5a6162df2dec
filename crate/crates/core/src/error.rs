use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u32, right: u32 },

    #[error("rank {rank} out of range (1..={max})")]
    RankOutOfRange { rank: u32, max: u32 },

    #[error("bitmask {bits:#b} does not fit rank {rank}")]
    IndexOutOfRange { bits: u32, rank: u32 },

    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not a projection (defect {defect:e})")]
    NotProjection { defect: f64 },

    #[error("element is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("element is not a unit vector (norm^2 = {norm_sq})")]
    NotUnitNorm { norm_sq: f64 },

    #[error("vector is (numerically) zero: norm^2 = {norm_sq:e}")]
    ZeroVector { norm_sq: f64 },

    #[error("element has non-real coefficients")]
    ComplexCoefficients,

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("{what} = {value} exceeds the supported maximum {max}")]
    TooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
