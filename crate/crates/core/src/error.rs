use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid knots: {0}")]
    InvalidKnots(String),
    #[error("nonpositive width sigma({x}) = {value}")]
    NonpositiveWidth { x: String, value: String },
    #[error("series diverges: {0}")]
    DivergentSeries(String),
    #[error("invalid lower parameter c = {0}: zero denominator before termination")]
    InvalidC(String),
    #[error("invalid gamma = {0}: must not be a non-positive integer")]
    InvalidGamma(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("integrand is not finite at {0}")]
    NonFinite(f64),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("unsupported k = {0}: this form covers only k = 2")]
    UnsupportedK(u32),
    #[error("x = {0} is outside the operator domain")]
    DomainError(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("mode {mode} is not admissible for {id}")]
    InadmissibleMode { id: String, mode: String },
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
