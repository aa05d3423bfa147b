use thiserror::Error;

/// Errors surfaced by ingestion, auditing and reporting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("patch selector `{0}` matches no element")]
    UnknownSelector(String),

    #[error("degenerate OCR quad for line `{0}`")]
    DegenerateQuad(String),

    #[error("image has no pixels")]
    EmptyImage,

    #[error("trend corpus is empty")]
    EmptyCorpus,

    #[error("reference could not be ingested: {0}")]
    ReferenceIngest(String),

    #[error("reports come from different sources: `{before}` vs `{after}`")]
    MismatchedSource { before: String, after: String },

    #[error("descriptor: {0}")]
    Descriptor(#[from] DescriptorError),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DescriptorError {
    #[error("remote endpoint unavailable: {0}")]
    RemoteUnavailable(String),
    #[error("response failed schema validation: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
