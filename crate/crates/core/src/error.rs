use thiserror::Error;

/// Errors raised by the diagnostics library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The input data cannot support the request (too few points, bad index).
    #[error("input error: {0}")]
    Input(String),

    /// A radii specification is malformed (non-monotone breaks or values).
    #[error("structural error: {0}")]
    Structural(String),

    /// A hypothesis required by a transformation does not hold.
    #[error("precondition error: {0}")]
    Precondition(String),

    /// An argument lies outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An experiment configuration failed validation.
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    /// Reports with incompatible schema versions were compared.
    #[error("version error: {0}")]
    Version(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by the caller's configuration rather than by execution.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config { .. } | Error::Parameter(_) | Error::Structural(_) | Error::Precondition(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
