use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("points span a subspace of dimension {rank} < {dim}")]
    DegenerateSpan { rank: usize, dim: usize },

    #[error("vertex {index} has no antipode and closure under negation is disabled")]
    AsymmetricInput { index: usize },

    #[error("candidate facets {first} and {second} nearly coincide (distance {distance:e})")]
    NumericallyIllConditioned {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: String },

    #[error("zero vector")]
    ZeroVector,

    #[error("semi-inner product requires 1 < p < inf, got p = {0}")]
    UnsupportedP(String),

    #[error("epsilon must lie in [0, 1), got {0}")]
    BadEpsilon(f64),

    #[error("functionals are linearly dependent")]
    DependentFunctionals,

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("unsupported dimension {found}, expected {expected}")]
    UnsupportedDimension { expected: usize, found: usize },

    #[error("zero operator")]
    ZeroOperator,

    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),

    #[error("need at least 3 extreme supporting functionals, found {found}")]
    TooFewFunctionals { found: usize },

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
