use thiserror::Error;

/// Errors raised by model construction, assembly, and the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent q = {q} is not admissible for d = {d}, alpha = {alpha}: {violated}")]
    Inadmissible {
        d: usize,
        q: f64,
        alpha: f64,
        violated: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("spectral parameter too close to the free spectrum: distance {distance:e}")]
    TooCloseToSpectrum { distance: f64 },
    #[error("QR iteration failed to converge at index {index} after {iterations} iterations")]
    NonConvergence { index: usize, iterations: usize },
    #[error("region membership indeterminate: crossing count unstable after {levels} refinements")]
    Indeterminate { levels: usize },
    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },
    #[error("config rejected:{0}")]
    Schema(SchemaIssues),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

/// Every problem found while reading a config, in line order.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaIssues(pub Vec<SchemaIssue>);

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaIssue {
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for SchemaIssues {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for issue in &self.0 {
            write!(f, "\n  line {}, key `{}`: {}", issue.line, issue.key, issue.message)?;
        }
        Ok(())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
