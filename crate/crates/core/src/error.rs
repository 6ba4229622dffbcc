use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: unknown arrow `{name}` in relation")]
    UnknownArrow { line: usize, name: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("relation `{0}` is not a composable path")]
    NonComposableRelation(String),

    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),

    #[error("paths are not composable: {0}")]
    NonComposable(String),

    #[error("path {0} is zero in the algebra")]
    ZeroPath(String),

    #[error("walk is not a valid string: {0}")]
    InvalidWalk(String),

    #[error("presentation is not a string tree: {0}")]
    NotStringTree(String),

    #[error("presentation is not gentle: {0}")]
    NotGentle(String),

    #[error("random generation failed after {0} attempts")]
    GenerationFailed(usize),

    #[error("malformed document: {0}")]
    Document(String),

    #[error("combinatorial routes disagree: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
