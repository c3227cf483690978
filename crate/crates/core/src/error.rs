use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator index {index} out of range (group has {count} generators)")]
    GeneratorOutOfRange { index: usize, count: usize },

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("gamma is not surjective onto G")]
    NotSurjective,

    #[error("structures are over different ambient groups")]
    AmbientMismatch,

    #[error("coset limit {limit} exceeded")]
    CosetLimit { limit: usize },

    #[error("unsupported ambient group for {op}: {kind}")]
    UnsupportedAmbient { op: &'static str, kind: String },

    #[error("inconsistent polycyclic presentation: {0}")]
    Inconsistent(String),

    #[error("map is not a well-defined homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("inversion failed: {0}")]
    Inversion(String),

    #[error("level mismatch: {0}")]
    Level(String),

    #[error("undecidable here: {0}")]
    Undecidable(String),

    #[error("internal: {0}")]
    Internal(String),

    #[error("{section}:{line}: {message}")]
    Parse {
        section: String,
        line: usize,
        message: String,
    },

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
