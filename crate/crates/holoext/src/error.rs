use thiserror::Error;

/// Errors shared across the library.
///
/// Variants are grouped by how the CLI maps them to exit codes: everything
/// except [`Error::InternalConsistency`] is a rejected input (exit 2);
/// `InternalConsistency` signals that two supposedly-equal computation paths
/// disagreed, which is a bug, not a bad input (exit 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the required domain: {context}")]
    OutsideDomain { context: String },

    #[error("operation `{op}` is not supported for domain kind `{kind}`")]
    UnsupportedDomain { kind: String, op: String },

    #[error("degenerate normal: defining-function gradient vanishes at the boundary point")]
    DegenerateNormal,

    #[error("degenerate datum: the two points coincide below the distinctness threshold")]
    DegenerateDatum,

    #[error("degenerate boundary functional: h is numerically zero on the grid")]
    DegenerateFunctional,

    #[error("coincident interpolation nodes (indices {i} and {j})")]
    CoincidentNodes { i: usize, j: usize },

    #[error("ill-conditioned node set: Gram condition estimate {cond:.3e} exceeds the threshold")]
    IllConditionedNodes { cond: f64 },

    #[error("matrix is not Hermitian within tolerance (max asymmetry {asymmetry:.3e})")]
    NonHermitian { asymmetry: f64 },

    #[error("Gram matrix is singular or indefinite")]
    SingularGram,

    #[error("length mismatch: {what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported disc: {0}")]
    UnsupportedDisc(String),

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("retract maps a probe outside the closed domain: {context}")]
    RangeViolation { context: String },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
