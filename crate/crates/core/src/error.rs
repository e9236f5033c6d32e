use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    IoBare(#[from] std::io::Error),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("document {id} is missing label `{attribute}`")]
    MissingLabel { id: String, attribute: String },

    #[error("unmatched label id `{0}`")]
    UnmatchedId(String),

    #[error("corpus is empty: {0}")]
    EmptyCorpus(&'static str),

    #[error("document {id} has {tokens} tokens, fewer than shingle size {shingle_size}")]
    TooShort {
        id: String,
        tokens: usize,
        shingle_size: usize,
    },

    #[error("LSH parameter mismatch: {bands} bands x {rows} rows != {permutations} permutations")]
    BandMismatch {
        bands: usize,
        rows: usize,
        permutations: usize,
    },

    #[error("source `{0}` has no priority rank")]
    UnknownSource(String),

    #[error("featurization mismatch: {0}")]
    FeaturizationMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("predicate: {0}")]
    Predicate(String),

    #[error("weights are not on the simplex: {0}")]
    NotSimplex(String),

    #[error("bucket name mismatch: {0}")]
    NameMismatch(String),

    #[error("loss oracle: {0}")]
    Oracle(String),

    #[error("config: {0}")]
    Config(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
