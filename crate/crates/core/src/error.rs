use thiserror::Error;

/// Errors raised by tensor construction, applies and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shift a = {0} is a non-positive integer; a must lie in R \\ Z^- (a not in {{0, -1, -2, ...}})")]
    ExcludedShift(f64),

    #[error("index {index:?} out of range for dimension {dim}")]
    IndexOutOfRange { index: Vec<usize>, dim: usize },

    #[error("multi-index has {got} components, tensor order is {order}")]
    IndexArity { got: usize, order: usize },

    #[error("shape mismatch: expected vector of length {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("constant {name} is undefined for a = {shift} (requires a > 0)")]
    UndefinedConstant { name: &'static str, shift: f64 },

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("divergent tail exponent s = {0} (need s > 1)")]
    DivergentExponent(f64),
}

pub type Result<T> = std::result::Result<T, HilbertError>;
