use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("input truncated")]
    Truncated,
    #[error("varint overflows u64")]
    Overflow,
    #[error("non-canonical encoding: {0}")]
    NonCanonical(String),
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("bad hex: {0}")]
    Hex(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("malformed request: {0}")]
    MalformedRequest(String),
    #[error("malformed item: {0}")]
    MalformedItem(String),
    #[error("enumeration index {index} beyond the supplied prefix of length {available}")]
    UniverseExhausted { index: usize, available: usize },
    #[error("empty item sequence")]
    EmptySequence,
    #[error("sequence invalid at position {position}")]
    InvalidSequence { position: usize },
    #[error("universe bound {bound} exceeds exhaustive-search limit {max}")]
    BoundTooLarge { bound: usize, max: usize },
    #[error("framework mismatch: {left} vs {right}")]
    FrameworkMismatch { left: String, right: String },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("W_{e}: stage of element {element} decreases along the listing")]
    NonMonotoneStages { e: u64, element: u64 },
    #[error("W_{e}: element {element} listed twice")]
    DuplicateElement { e: u64, element: u64 },
    #[error("value {value} at {key} is not a bit")]
    NotABit { key: String, value: u64 },
    #[error("Phi_{e}({x}) key {key} shorter than its use {use_bound}")]
    KeyShorterThanUse { e: u64, x: u64, key: String, use_bound: usize },
    #[error("Phi_{e}({x}): keys {first} and {second} agree below use {use_bound} but disagree")]
    UseInconsistent {
        e: u64,
        x: u64,
        first: String,
        second: String,
        use_bound: usize,
    },
    #[error("duplicate entry {0}")]
    Duplicate(String),
}

/// Errors reading line-oriented transcript and run files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Content { line: usize, source: FrameworkError },
    #[error("file is for framework {found}, expected {expected}")]
    FrameworkMismatch { expected: String, found: String },
    #[error("file ends before its `end` marker")]
    Truncated,
}
