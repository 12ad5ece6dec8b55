use std::path::PathBuf;

/// Errors produced anywhere in the summarization and evaluation pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("document contains no sentence with alphabetic content")]
    EmptyDocument,

    #[error("no sentence retains any token after filtering")]
    EmptyVocabulary,

    #[error("lemmatization requested but no lemma dictionary was loaded")]
    MissingDictionary,

    #[error("malformed lemma dictionary entry at line {line}: {content:?}")]
    DictionaryFormat { line: usize, content: String },

    #[error("source profile is empty: nothing to evaluate against")]
    EmptySource,

    #[error("corpus at {0} contains no admissible documents")]
    CorpusEmpty(PathBuf),

    #[error("no document produced a result")]
    NoResults,

    #[error("invalid budget: {0}")]
    InvalidBudget(String),

    #[error("invalid normalization mode: {0}")]
    InvalidNormalization(String),

    #[error("unsupported language: {0}")]
    InvalidLanguage(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: file is not valid UTF-8")]
    NotUtf8 { path: PathBuf },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
