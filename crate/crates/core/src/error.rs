use thiserror::Error;

/// Errors shared across the library.
///
/// Integration and eigensolver failures carry enough context to be reported
/// distinctly by a driver (step underflow vs. fixed-point stagnation vs.
/// iteration budget, and so on).
#[derive(Debug, Error)]
pub enum GeoqError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("flux integral requires a closed surface")]
    OpenSurface,

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("zero-norm section")]
    ZeroNorm,

    #[error("step size underflow: step {step:.3e} after {refinements} refinements")]
    StepUnderflow { step: f64, refinements: u32 },

    #[error("fixed-point iteration failed to converge within {max_iters} iterations at t = {t:.6}")]
    FixedPointDivergence { t: f64, max_iters: usize },

    #[error("maximum step count exceeded ({max_steps})")]
    MaxStepsExceeded { max_steps: u64 },

    #[error("energy drift {drift:.3e} exceeds tolerance {tol:.3e} at smallest admissible step")]
    EnergyToleranceNotMet { drift: f64, tol: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("eigensolver did not converge: {converged} of {requested} pairs within residual {tol:.1e}")]
    EigenNonConvergence {
        requested: usize,
        converged: usize,
        tol: f64,
    },

    #[error("inner linear solve failed: {0}")]
    LinearSolveFailure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, GeoqError>;
