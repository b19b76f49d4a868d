use thiserror::Error;

/// Errors produced by the library.
///
/// Variants split into two groups: input-shape problems (syntax and file
/// format) and semantic problems (operations applied to values that violate
/// a precondition). `is_input_error` distinguishes them for callers that
/// map errors to exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("language mismatch: {0}")]
    LanguageMismatch(String),

    #[error("invalid language: {0}")]
    InvalidLanguage(String),

    #[error("language too large: {n} variables exceeds the limit of {max}")]
    LanguageTooLarge { n: usize, max: usize },

    #[error("empty model set")]
    EmptyModelSet,

    #[error("partial assignment is not realizable in the model set")]
    NotRealizable,

    #[error("blocks do not form a partition: {0}")]
    NotAPartition(String),

    #[error("partition does not jointly factorize both model sets")]
    NotJointlyFactorizable,

    #[error("invalid weight for `{0}`: weights must be positive integers")]
    InvalidWeight(String),

    #[error("invalid recoding: {0}")]
    InvalidRecoding(String),

    #[error("factorization search aborted: {blocks} independent blocks after pre-merge exceeds the limit of {max}")]
    TooManyBlocks { blocks: usize, max: usize },
}

impl Error {
    /// True for errors caused by unparseable input text rather than by the
    /// meaning of well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::Format(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
