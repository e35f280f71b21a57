use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("even modulus: divide out the factor 2 first")]
    EvenModulus,
    #[error("modulus {0} shares a factor with 10 and is trivially factorable")]
    TriviallyFactorable(String),
    #[error("alpha = {alpha} is outside [{min}, {max_exclusive})")]
    AlphaOutOfRange {
        alpha: String,
        min: String,
        max_exclusive: String,
    },
    #[error("alpha must be below X0 = {0}")]
    AlphaAtPole(String),
    #[error("(c = {c}, alpha = {alpha}) is not a witness for this modulus")]
    InvalidWitness { c: String, alpha: String },
    #[error("random generation failed: {0}")]
    Generation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
