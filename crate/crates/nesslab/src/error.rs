//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NonHermitianInput { asymmetry: f64, tol: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix norm {norm:.3e} exceeds the exponential cap {cap:.3e}")]
    OverflowRisk { norm: f64, cap: f64 },

    #[error("energy {energy} outside tabulated range [{min}, {max}]")]
    OutOfTable { energy: f64, min: f64, max: f64 },

    #[error("invalid spectral-function table: {reason}")]
    InvalidTable { reason: String },

    #[error("spectral function violates the KMS condition at E = {energy}: defect {defect:.3e}")]
    KmsViolation { energy: f64, defect: f64 },

    #[error("principal-value cutoff {cutoff} too small for energy {energy} (need |E| < 0.9*cutoff)")]
    CutoffTooSmall { energy: f64, cutoff: f64 },

    #[error("operator list is empty")]
    EmptyInput,

    #[error("generator has no stationary state (internal error for a trace-preserving map)")]
    NoStationaryState,

    #[error("stationary state is not unique: kernel dimension {kernel_dim}")]
    NonUniqueStationaryState { kernel_dim: usize },

    #[error("energy flux has non-real value: imaginary part {imaginary:.3e}")]
    NonRealFlux { imaginary: f64 },

    #[error("entropy production has non-real value: imaginary part {imaginary:.3e}")]
    NonRealValue { imaginary: f64 },

    #[error("state is not faithful: smallest eigenvalue {min_eigenvalue:.3e} below {floor:.3e}")]
    NotFaithful { min_eigenvalue: f64, floor: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
