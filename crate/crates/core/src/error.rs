use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("inadmissible word `{0}`")]
    Inadmissible(String),
    #[error("needs more letters: the image is determined only for inputs of length >= {required}")]
    NeedsMoreLetters { required: usize },
    #[error("section is not a group word at this prefix (rule blocks straddle position {position})")]
    Unaligned { position: usize },
    #[error("{what} exceeded cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("image ray is not eventually periodic within {bound} periods")]
    NonPeriodic { bound: usize },
    #[error("operation requires a machine over a single stationary alphabet")]
    NonUniform,
    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular system: {0}")]
    Singular(String),
    #[error("bratteli: {0}")]
    Diagram(String),
    #[error("invalid folner chain: {0}")]
    Chain(String),
    #[error("potential out of range: {0}")]
    Range(String),
    #[error("unknown zoo entry `{0}`")]
    UnknownEntry(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Io(_) => 1,
            Error::CapExceeded { .. } | Error::NonPeriodic { .. } => 3,
            Error::NoConvergence { .. } | Error::Singular(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
