use thiserror::Error;

/// Errors raised by the toolkit. `Format` covers malformed input text,
/// `Usage` covers violated preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("format error on line {line}: {message}")]
    Line { line: usize, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("member {index} is not a longest path (length {length}, longest is {longest})")]
    NotLongest {
        index: usize,
        length: usize,
        longest: usize,
    },
}

impl Error {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Error::Usage(message.into())
    }

    pub(crate) fn format(offset: usize, message: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn line(line: usize, message: impl Into<String>) -> Self {
        Error::Line {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
