use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error at row {row}, column {col}: {msg}")]
    Matrix { row: usize, col: usize, msg: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("coloring is not complete ({colored} of {edges} edges colored)")]
    Incomplete { colored: usize, edges: usize },

    #[error("arithmetic overflow: {0}")]
    Range(String),

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("checkpoint field `{field}`: {msg}")]
    Checkpoint { field: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn checkpoint(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Checkpoint {
            field: field.into(),
            msg: msg.into(),
        }
    }
}
