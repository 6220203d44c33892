use thiserror::Error;

use crate::oracle::VerificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NonHermitianInput { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("unsupported matrix shape {rows}x{cols}: {reason}")]
    BadShape {
        rows: usize,
        cols: usize,
        reason: &'static str,
    },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("state is not normalized (norm squared {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("concurrence {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("mixing matrix columns are not orthonormal (deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("mixing matrix has {cols} columns but the decomposition has {members} members")]
    MemberCountMismatch { cols: usize, members: usize },

    #[error("preconcurrence equalization failed: member {member} has {value}, target {target}")]
    TargetUnreachable {
        member: usize,
        value: f64,
        target: f64,
    },

    #[error("no closure phases exist: lambda_1 = {largest} >= {rest} = lambda_2 + lambda_3 + lambda_4")]
    NoClosure { largest: f64, rest: f64 },

    #[error("zero-concurrence construction requires lambda_1 - lambda_2 - lambda_3 - lambda_4 < 0, got {0}")]
    WrongCase(f64),

    #[error("decomposition needs at least {rank} members, got {requested}")]
    TooFewMembers { requested: usize, rank: usize },

    #[error("lambda routes disagree by {difference:.3e}")]
    SpectrumMismatch { difference: f64 },

    #[error("formula violation: {0:?}")]
    FormulaViolation(Box<VerificationReport>),
}
