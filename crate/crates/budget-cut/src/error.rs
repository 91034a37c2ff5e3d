use thiserror::Error;

/// Library error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A vertex labelling that does not split the graph in two.
    #[error("degenerate partition: {0}")]
    DegeneratePartition(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("line {line}: value out of range: {msg}")]
    ValueRange { line: usize, msg: String },

    /// Exhaustive search refused: the instance exceeds the configured cap.
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
