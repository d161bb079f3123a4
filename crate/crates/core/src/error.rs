use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LgtError {
    #[error("qubit count mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("{what}: {size} exceeds the limit of {limit}")]
    SizeLimit { what: &'static str, size: usize, limit: usize },
    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },
    #[error("unsupported dimension d={0}")]
    UnsupportedDimension(usize),
    #[error("invalid spin {0}: 2S must be a positive integer")]
    InvalidSpin(f64),
    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unphysical state: {0}")]
    Unphysical(String),
    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl LgtError {
    pub fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        LgtError::Config { path: path.into(), msg: msg.into() }
    }

    /// Whether the error reflects an infeasible problem size rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, LgtError::SizeLimit { .. })
    }

    pub fn io(path: impl AsRef<std::path::Path>, e: std::io::Error) -> Self {
        LgtError::Io { path: path.as_ref().display().to_string(), msg: e.to_string() }
    }

    /// Process exit status: 2 for bad input, 3 for infeasible sizes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LgtError::Config { .. } | LgtError::Parse(_) | LgtError::InvalidSpin(_) | LgtError::UnsupportedDimension(_) | LgtError::Unphysical(_) => 2,
            LgtError::SizeLimit { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, LgtError>;
