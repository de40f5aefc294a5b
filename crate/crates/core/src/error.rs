use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("Minkowski sums of a ball and a polytope are not represented")]
    UnsupportedMix,
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("operation requires a nonempty body")]
    EmptyBody,
    #[error("origin is not an interior point of the body")]
    OriginNotInterior,
    #[error("expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("linear system for polynomial coefficients is singular")]
    SingularSystem,
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("height {0} outside (0, 1]")]
    HeightOutOfRange(f64),
    #[error("integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("second argument must be a rotation-invariant radial function")]
    NotRotationInvariant,
    #[error("function is not log-concave: {0}")]
    NotLogConcave(String),
    #[error("function is not regular: {0}")]
    NotRegular(String),
    #[error("profile cannot be inverted: {0}")]
    NonInvertibleProfile(String),
    #[error("weights must have homothetic level sets")]
    NonHomothetic,
    #[error("level set is unbounded")]
    Unbounded,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
