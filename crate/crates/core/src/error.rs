use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Invalid arguments or automaton data handed to an operation.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A computation would exceed a configured state or element cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The request is well formed but has no meaningful answer (e.g. the complexity of an empty atom).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
