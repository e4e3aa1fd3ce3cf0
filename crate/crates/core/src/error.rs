use thiserror::Error;

/// Errors produced anywhere in the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("division by a jet with zero constant term")]
    DivisionByZero,

    #[error("{function}: argument {value} outside the domain")]
    Domain { function: &'static str, value: f64 },

    #[error("derivative of order {requested} requested from a jet of order {order}")]
    OrderTooLow { requested: usize, order: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("curve spec line {line}: {message}")]
    CurveSpec { line: usize, message: String },

    #[error("component c{component} at t = {t}: {source}")]
    CurveEval {
        component: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("t = {t} is outside the open curve domain ({min}, {max})")]
    OutsideDomain { t: f64, min: f64, max: f64 },

    #[error("degenerate tangent plane at (s, t) = ({s}, {t}): {reason}")]
    DegenerateTangent { s: f64, t: f64, reason: String },

    #[error("frame is not pseudo-orthonormal (Gram residual {residual:e})")]
    NotPseudoOrthonormal { residual: f64 },

    #[error("curve failed validation: {0}")]
    InvalidCurve(String),

    #[error("non-finite value at (s, t) = ({s}, {t})")]
    NonFinite { s: f64, t: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Attach a surface point to point-free frame errors.
    pub fn at_point(self, s: f64, t: f64) -> Error {
        match self {
            Error::DegenerateTangent { reason, .. } => Error::DegenerateTangent { s, t, reason },
            Error::NonFinite { .. } => Error::NonFinite { s, t },
            other => other,
        }
    }
}
