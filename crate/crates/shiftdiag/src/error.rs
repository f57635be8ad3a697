//! Structured errors shared by the language, generator, diagram, and path modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient prefix: need at least {needed} letters, got {got}")]
    InsufficientPrefix { needed: usize, got: usize },

    #[error("block not in language: {block}")]
    BlockNotInLanguage { block: String },

    #[error("length {len} out of range (table max_len {max_len})")]
    LengthOutOfRange { len: usize, max_len: usize },

    #[error("horizon exceeds table: |w| + H = {needed} letters, table max_len {max_len}")]
    HorizonExceedsTable { needed: usize, max_len: usize },

    #[error(
        "complexity mismatch at length {len}: observed {observed}, expected {expected} \
         (scanned prefix too short?)"
    )]
    ComplexityMismatch {
        len: usize,
        observed: usize,
        expected: usize,
    },

    #[error("directive exhausted: {0}")]
    DirectiveExhausted(String),

    #[error("invalid directive: {0}")]
    InvalidDirective(String),

    #[error("invalid slope: {0}")]
    InvalidSlope(String),

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("substitution not prolongable: image of seed '{seed}' does not start with the seed")]
    NotProlongable { seed: char },

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error(
        "depth bound too small: a truncated vertex is reachable at path position {position}, \
         so length-{n} path counts would be unreliable"
    )]
    DepthBoundTooSmall { n: usize, position: usize },

    #[error("structural failure: {0}")]
    StructuralFailure(String),

    #[error(
        "path/block bijection failure: {} duplicated projections, {} missing blocks, {} extra blocks \
         (duplicates: {duplicates:?}, missing: {missing:?}, extra: {extra:?})",
        duplicates.len(), missing.len(), extra.len()
    )]
    BijectionFailure {
        duplicates: Vec<String>,
        missing: Vec<String>,
        extra: Vec<String>,
    },

    #[error("ambiguous decomposition of {block}: candidate ancestors {ancestors:?}")]
    AmbiguousCutting {
        block: String,
        ancestors: Vec<String>,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{failed} verification check(s) failed")]
    VerificationFailed { failed: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
