use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("every seed was rejected by the |energy| > {0} filter")]
    AllSeedsFiltered(f64),
    #[error("config: {0}")]
    Config(String),
    #[error("unknown scheme name '{0}'")]
    UnknownScheme(String),
    #[error("scheme '{0}': a ver- set must be closed under multiplication")]
    NotAGroup(String),
    #[error("curves need at least two mu values and one scheme")]
    InsufficientData,
    #[error(transparent)]
    Core(#[from] symx::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
