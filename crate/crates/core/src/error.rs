use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("variable x{index} is out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("exponent exceeds the 2^31 bound")]
    ExponentOverflow,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty support (zero polynomial has no Newton polyhedron)")]
    EmptySupport,
    #[error("support point {0:?} has a negative coordinate")]
    NegativeSupport(Vec<i64>),
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("face is not a face of the Newton polyhedron of this polynomial")]
    FaceNotInPolyhedron,
    #[error("zero vector")]
    ZeroVector,
    #[error("covectors are linearly dependent")]
    DependentCovectors,
    #[error("covector {index} takes a negative value on support point {point:?}")]
    NegativeOnSupport { index: usize, point: Vec<i64> },
    #[error("the Minkowski sum is full-dimensional; no monomial reduction applies")]
    FullDimensional,
    #[error("exact face-tuple enumeration needs n <= 4 (got n = {0}); use sampled mode")]
    DimensionTooLarge(usize),
    #[error("mapping has {p} components but only {n} variables")]
    TooManyComponents { p: usize, n: usize },
    #[error("mapping must have at least one component")]
    NoComponents,
    #[error("coordinate x{0} is zero; the point must lie in the torus")]
    ZeroCoordinate(usize),
    #[error("exact 2D check requires n = 2 (got n = {0})")]
    NotTwoDimensional(usize),
    #[error("degenerate regression: only {0} usable grid points")]
    DegenerateRegression(usize),
    #[error("mapping is not non-degenerate at infinity")]
    NotNondegenerate,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
