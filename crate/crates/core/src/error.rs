use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    /// A conditioning event has (numerically) zero probability.
    #[error("degenerate outcome: probability {0:e} is below 1e-14")]
    DegenerateOutcome(f64),
    #[error("degenerate coupling: {0}")]
    DegenerateCoupling(String),
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
    #[error("unidentifiable reconstruction: {0}")]
    Unidentifiable(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by physically degenerate parameters rather than
    /// malformed input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateOutcome(_)
                | Error::DegenerateCoupling(_)
                | Error::ModelInconsistency(_)
                | Error::Unidentifiable(_)
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
