use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed bracket text. `offset` is a byte offset into the parsed line.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A parse error attributed to a line of a multi-line input.
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("model file: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::Line {
            line,
            source: Box::new(self),
        }
    }
}
