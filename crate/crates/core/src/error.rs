use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library. Residuals are reported as `f64`
/// regardless of the scalar type they were computed in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (relative residual {residual:e})")]
    NonHermitian { residual: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NotConverged { sweeps: usize, off_diagonal: f64 },
    #[error("function is undefined at eigenvalue {eigenvalue}")]
    FunctionUndefined { eigenvalue: f64 },
    #[error("spectrum [{min}, {max}] is not contained in [0, 1]")]
    NotContraction { min: f64, max: f64 },
    #[error("matrix is not a projection (idempotency residual {residual:e})")]
    NotProjection { residual: f64 },
    #[error("invalid projection system: {reason}")]
    InvalidSystem { reason: String },
    #[error("tolerance {name} = {value:e} is below machine epsilon")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("pair is not absolutely compatible (residual {residual:e})")]
    NotCompatible { residual: f64 },
    #[error("pair does not commute (commutator norm {residual:e})")]
    NotCommuting { residual: f64 },
    #[error("matrix is not normal (residual {residual:e})")]
    NotNormal { residual: f64 },
    #[error("off-diagonal blocks do not vanish (leakage {residual:e})")]
    OffDiagonalLeak { residual: f64 },
    #[error("element is not in the strict trace-one set of 2x2 contractions")]
    NotInS,
    #[error("off-diagonal parameter alpha is zero")]
    AlphaZero,
    #[error("branch {branch} requires {requirement}")]
    BranchInvalid { branch: &'static str, requirement: &'static str },
    #[error("point lies within the exclusion radius of a major-axis extremity")]
    ExtremityExcluded,
    #[error("input is the zero or identity matrix")]
    TrivialInput,
    #[error("classification is inconsistent: {reason}")]
    ClassificationInconsistent { reason: String },
    #[error("element is not strict")]
    NotStrict,
    #[error("dimension {n} is odd")]
    OddDimension { n: usize },
    #[error("rank of the Jordan product is {rank}, expected {expected}")]
    RankMismatch { rank: usize, expected: usize },
    #[error("no permutation with a nonzero diagonal product")]
    NoValidPermutation,
    #[error("invalid generator configuration: {reason}")]
    InvalidConfig { reason: String },
    #[error("resampling exhausted after {attempts} attempts")]
    ResamplingExhausted { attempts: usize },
}
