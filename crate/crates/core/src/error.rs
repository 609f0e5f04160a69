use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable
/// machine-readable code via [`Error::code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: defect {defect:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("operator norm {norm} exceeds 1: not a contraction")]
    NotContraction { norm: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is singular (smallest eigenvalue {min_eigenvalue:e})")]
    Singular { min_eigenvalue: f64 },

    #[error("function `{function}` is undefined at eigenvalue {value}")]
    Domain { function: String, value: f64 },

    #[error("{what} out of range: {value} not in {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid spectral scale: {0}")]
    InvalidScale(String),

    #[error("invalid integration interval ({lo}, {hi})")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("spectral dominance fails at index {index}: lambda_{index}(A) = {lhs} > lambda_{index}(B) = {rhs}")]
    DominanceViolated { index: usize, lhs: f64, rhs: f64 },

    #[error("no witness found; best psd margin {best_margin:e}")]
    WitnessNotFound { best_margin: f64 },

    #[error("function `{function}` lacks required property `{flag}`")]
    MissingFlag { function: String, flag: String },

    #[error("function `{function}`: declared property `{flag}` refuted ({witness})")]
    FlagRefuted {
        function: String,
        flag: String,
        witness: String,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("unknown scale `{0}`")]
    UnknownScale(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier for scripted consumers.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "E_NOT_HERMITIAN",
            Error::DimensionMismatch { .. } => "E_DIMENSION",
            Error::InvalidMatrix(_) => "E_INVALID_MATRIX",
            Error::NotContraction { .. } => "E_NOT_CONTRACTION",
            Error::NotPsd { .. } => "E_NOT_PSD",
            Error::Singular { .. } => "E_SINGULAR",
            Error::Domain { .. } => "E_DOMAIN",
            Error::OutOfRange { .. } => "E_OUT_OF_RANGE",
            Error::InvalidParameter(_) => "E_INVALID_PARAMETER",
            Error::InvalidScale(_) => "E_INVALID_SCALE",
            Error::InvalidInterval { .. } => "E_INVALID_INTERVAL",
            Error::Unsupported(_) => "E_UNSUPPORTED",
            Error::DominanceViolated { .. } => "E_PRECONDITION",
            Error::WitnessNotFound { .. } => "E_WITNESS_NOT_FOUND",
            Error::MissingFlag { .. } => "E_MISSING_FLAG",
            Error::FlagRefuted { .. } => "E_FLAG_REFUTED",
            Error::Parse { .. } => "E_PARSE",
            Error::UnknownCase(_) => "E_UNKNOWN_CASE",
            Error::UnknownScale(_) => "E_UNKNOWN_SCALE",
            Error::Io(_) => "E_IO",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
