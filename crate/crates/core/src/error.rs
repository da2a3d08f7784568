//! Crate-wide error type with module-qualified messages.

use thiserror::Error;

/// Errors produced by the library. Messages are prefixed with the module
/// that raised them so pipeline failures point at the failing stage.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("lexicon: line {line}: {message}")]
    LexiconParse { line: usize, message: String },

    #[error("embed: line {line}: {message}")]
    EmbeddingParse { line: usize, message: String },

    #[error("embed: mean embedding of an empty token sequence")]
    EmptyEmbeddingInput,

    #[error("matcher: input contains reserved token `{token}` at position {position}")]
    ReservedToken { token: String, position: usize },

    #[error("matcher: match [{start}, {end}) out of bounds for sequence of length {len}")]
    MatchOutOfBounds { start: usize, end: usize, len: usize },

    #[error("represent: mode `masked-embed` requires an embedding table")]
    MissingEmbeddings,

    #[error("model: input mode `{found}` does not match model mode `{expected}`")]
    ModeMismatch { expected: String, found: String },

    #[error("model: forward on an empty token sequence")]
    EmptyInput,

    #[error("model: {0}")]
    InvalidConfig(String),

    #[error("model: training data must contain both classes")]
    SingleClassDataset,

    #[error("model: training data is empty or unlabeled")]
    EmptyDataset,

    #[error("model: non-finite loss at epoch {epoch}, batch {batch}; aborting")]
    NonFiniteLoss { epoch: usize, batch: usize },

    #[error("model: checkpoint: {0}")]
    Checkpoint(String),

    #[error("eval: {0}")]
    EmptyEvalInput(&'static str),

    #[error("records: line {line}: {message}")]
    RecordParse { line: usize, message: String },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Coarse classification used by the CLI to pick an exit code.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::MissingEmbeddings | Error::ModeMismatch { .. } | Error::InvalidConfig(_)
        )
    }

    /// True for failures that indicate a broken internal invariant rather
    /// than bad input data.
    pub fn is_internal_error(&self) -> bool {
        matches!(self, Error::NonFiniteLoss { .. })
    }
}
