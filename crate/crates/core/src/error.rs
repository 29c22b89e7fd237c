use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid automaton: {0}")]
    Semantic(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("alphabet mismatch: {0}")]
    Alphabet(String),
    #[error("exploration budget of {0} abstract states exceeded")]
    Budget(usize),
    #[error("support left the span window: {0}")]
    SpanEscape(String),
    #[error("edge consistency violated: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
