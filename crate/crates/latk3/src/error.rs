use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degenerate form")]
    Degenerate,
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("search bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    #[error("generator not found: {0}")]
    GeneratorNotFound(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for input problems (bad syntax, bad arguments) as opposed to
    /// computations that were refused.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::UnknownName(_) | Error::Invalid(_) | Error::Io(_) | Error::Dimension(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
