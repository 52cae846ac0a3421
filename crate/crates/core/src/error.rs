use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("locus count mismatch: expected {expected}, found {found}")]
    LocusCountMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for {len} individuals")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("members do not form a sibling set")]
    NotSiblingSet,

    #[error("invalid population: {0}")]
    InvalidPopulation(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid MINREP instance: {0}")]
    InvalidMinRep(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("search budget exceeded")]
    BudgetExceeded,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
