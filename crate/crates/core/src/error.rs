use thiserror::Error;

/// Failure to load a symbol table file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("symbol table line {line}: {message}")]
pub struct TableError {
    pub line: usize,
    pub message: String,
}

/// Failure to build a codebook from selected entries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("zero count for token {0:?}")]
    ZeroCount(String),
    #[error("codeword length {0} exceeds 64 bits")]
    CodeTooLong(usize),
}

/// Failure to parse a serialized codebook.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(String),
    #[error("unknown hyphenation variant {0:?}")]
    BadVariant(String),
    #[error("malformed escape line")]
    MalformedEscape,
    #[error("line {line}: malformed entry: {reason}")]
    MalformedEntry { line: usize, reason: String },
    #[error("line {line}: duplicate token")]
    DuplicateToken { line: usize },
    #[error("prefix violation")]
    PrefixViolation,
    #[error("Kraft violation: codeword lengths do not form a complete prefix code")]
    KraftViolation,
    #[error("codebook file is not valid UTF-8")]
    InvalidUtf8,
}

/// Failure in the compression or decompression path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("codebook mismatch")]
    CodebookMismatch,
    #[error("wrong codebook")]
    WrongCodebook,
    #[error("corrupt payload")]
    CorruptPayload,
    #[error("corrupt padding")]
    CorruptPadding,
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("message too long: {0} bits")]
    TooLong(u64),
}

/// Failure of a metric computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("empty source")]
    EmptySource,
    #[error("probabilities must sum to 1")]
    NotNormalized,
    #[error("probabilities must be positive")]
    NonPositive,
}

/// Umbrella error for callers that drive the whole pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{0}")]
    Report(String),
}
