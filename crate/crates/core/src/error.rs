use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("relation `{name}` has arity {expected}, got {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("duplicate relation declaration `{0}`")]
    DuplicateRelation(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("element {element} outside domain 1..={size}")]
    OutOfRange { element: usize, size: usize },

    #[error("free variable `{0}`")]
    FreeVariable(String),

    #[error("unassigned variable `{0}`")]
    Unassigned(String),

    #[error("quantifier prefix {found} does not have the required shape {expected}")]
    WrongPrefix { expected: String, found: String },

    #[error("refusing exponential search on {size} elements (limit {limit})")]
    ScaleRefused { size: usize, limit: usize },

    #[error("malformed certificate: {0}")]
    Certificate(String),

    #[error("malformed DIMACS input: {0}")]
    Dimacs(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
