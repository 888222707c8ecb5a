use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    SolverFailure { sweeps: usize, residual: f64 },

    #[error("not positive semidefinite: eigenvalue {eigenvalue:.6e} is below -{tolerance:.1e}")]
    NotPositive { eigenvalue: f64, tolerance: f64 },

    #[error("not Hermitian: max |A - A^H| = {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("trace must be 1, got {trace} (|tr - 1| = {residual:.3e})")]
    NonUnitTrace { trace: f64, residual: f64 },

    #[error("not unitary: max |U^H U - I| = {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("not orthogonal: max |O^T O - I| = {residual:.3e}")]
    NotOrthogonal { residual: f64 },

    #[error("observable basis is not orthonormal: max |Tr(H_j H_k) - delta_jk| = {residual:.3e}")]
    NotOrthonormal { residual: f64 },

    #[error("alpha must lie strictly inside (0, 1), got {0}")]
    AlphaOutOfRange(f64),

    #[error("entropy index must satisfy q > 0 and q != 1, got {0}")]
    InvalidEntropyIndex(f64),

    #[error("expected a non-negative eigenvalue, got {0}")]
    NegativeArgument(f64),

    #[error("a pure state needs a nonzero vector")]
    ZeroVector,

    #[error("Werner parameter must lie in [0, 1], got {0}")]
    WernerOutOfRange(f64),

    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo:.6e}, g(hi) = {g_hi:.6e}")]
    BracketFailure { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("invalid matrix file: {0}")]
    Format(String),
}
