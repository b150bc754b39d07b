use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid multiplier: {0}")]
    Multiplier(String),
    #[error("numerical blow-up at t = {t}")]
    BlowUp { t: f64 },
    #[error("model refused: {0}")]
    Refused(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<toml::de::Error> for Error {
    fn from(e: toml::de::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
