use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("instance is infeasible: vertices {0} and {1} have identical balls")]
    Infeasible(usize, usize),

    #[error("layout tree leaves do not match the graph: {0}")]
    LayoutMismatch(String),

    #[error("bound violated for n = {n}: {msg}")]
    BoundViolation { n: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
