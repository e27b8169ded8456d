use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("corpus directory {path} does not exist or is not a directory")]
    MissingDirectory { path: PathBuf },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot split corpus `{org}` with {files} file(s); need at least 2")]
    TooFewFiles { org: String, files: usize },

    #[error("corpus `{0}` has zero bytes")]
    EmptyCorpus(String),

    #[error("no banding (b >= 2, r >= 2, b*r = {num_perm}) exists for {num_perm} permutations")]
    NoBanding { num_perm: usize },

    #[error("signature parameter mismatch: {0}")]
    SignatureMismatch(String),

    #[error("token sequence of length {len} exceeds the limit of {limit}")]
    SequenceTooLong { len: usize, limit: usize },

    #[error("architecture mismatch: {0}")]
    ArchMismatch(String),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("all aggregation weights are zero")]
    ZeroWeights,

    #[error("invalid training order: {0}")]
    InvalidOrder(String),

    #[error("checkpoint format error: {0}")]
    Checkpoint(String),

    #[error("zero generated lines; memorization ratio is undefined")]
    NoGeneratedLines,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
