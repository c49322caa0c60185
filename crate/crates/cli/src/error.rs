use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("{file}: x is not uniformly spaced at line {line}")]
    NonUniform { file: String, line: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Library(#[from] hodirac::error::Error),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
