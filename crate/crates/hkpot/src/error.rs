use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: asymmetry {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("matrix is not complex-symmetric: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotSymmetric { residual: f64, tol: f64 },
    #[error("matrix has rank > 1: second singular value {second:.3e} vs largest {largest:.3e}")]
    RankAboveOne { second: f64, largest: f64 },
    #[error("bilinear form is singular or ill-conditioned")]
    SingularForm,
    #[error("invalid partition {parts:?} for {family}: {reason}")]
    InvalidPartition {
        parts: Vec<usize>,
        family: &'static str,
        reason: String,
    },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("element violates algebra membership: {0}")]
    Membership(String),
    #[error("operation requires {expected} convention, element uses {found}")]
    WrongConvention {
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid fiber parameters: {0}")]
    InvalidFiber(String),
    #[error("wrong Jordan type for this potential formula: expected {expected}, detected {found}")]
    WrongJordanType { expected: String, found: String },
    #[error("radicand {value:.6e} is genuinely negative (below -{tol:.3e}); invariant computation is inconsistent")]
    NegativeRadicand { value: f64, tol: f64 },
    #[error("cubic has complex roots beyond tolerance (discriminant defect {defect:.3e})")]
    ComplexRoots { defect: f64 },
    #[error("spectrum group has odd multiplicity {multiplicity} at eigenvalue {value:.6e}; grouping failed")]
    MultiplicityParity { value: f64, multiplicity: usize },
    #[error("gauge transformation is not unitary (residual {0:.3e})")]
    NonUnitaryGauge(f64),
    #[error("moment-map solver did not converge: best residual {best:.3e} after {restarts} restarts (target {target:.3e})")]
    SolverDiverged {
        best: f64,
        restarts: usize,
        target: f64,
    },
    #[error("nilpotency violated: {0}")]
    NotNilpotent(String),
    #[error("non-finite entry produced (NaN or infinity)")]
    NonFinite,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
