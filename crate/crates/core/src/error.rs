use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("term is not ground: {0}")]
    NotGround(String),
    #[error("grid must contain at least one rational")]
    EmptyGrid,
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unbound variable `{name}`")]
    UnboundVariable { name: String, line: usize, col: usize },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, line: usize, col: usize },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("formula is not a sentence: free variable `{0}`")]
    NotClosed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
