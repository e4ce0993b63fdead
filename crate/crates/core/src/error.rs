use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The input is not a readable PDF. `object` names the object (or
    /// structure such as the xref table) that failed.
    #[error("malformed PDF at {object}: {message}")]
    Parse { object: String, message: String },

    /// Input that parses but that we refuse to handle, e.g. encrypted files.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("document contains no extractable text")]
    EmptyDocument,

    #[error("layout data is inconsistent: {0}")]
    InvalidLayout(String),

    #[error("query has no searchable terms after stopword removal")]
    EmptyQuery,

    #[error("span [{start}, {end}) covers no glyphs")]
    EmptyGeometry { start: usize, end: usize },

    #[error("quad {quad} on page {page} lies outside the media box {media_box}")]
    Geometry {
        page: usize,
        quad: String,
        media_box: String,
    },

    #[error("invalid judgment: {0}")]
    Validation(String),

    #[error("summary statistics need at least one value")]
    EmptySample,

    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown section name {0:?}")]
    UnknownSection(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(object: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            object: object.into(),
            message: message.to_string(),
        }
    }
}
