use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("undeclared variable `{name}` at line {line}, column {column}")]
    UndeclaredVariable { name: String, line: usize, column: usize },

    #[error("system contains no polynomials")]
    EmptySystem,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("start system still degenerate after {attempts} draws")]
    DegenerateStartSystem { attempts: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid witness set: {0}")]
    InvalidWitness(String),

    #[error("membership test inconclusive: all {0} witness paths failed")]
    Inconclusive(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
