use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A vertex label could not be parsed, or does not belong to the family it was used with.
    #[error("vertex encoding error: {0}")]
    Encoding(String),

    /// A constructor or operation received parameters outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A truncation would exceed the configured vertex-count cap.
    #[error("resource cap exceeded: truncation needs more than {cap} vertices")]
    ResourceCap { cap: usize },

    /// The truncation is too shallow for the requested computation.
    #[error("insufficient truncation radius: need {needed}, have {available}")]
    InsufficientRadius { needed: usize, available: usize },

    /// Exact and floating functions were combined.
    #[error("cannot mix exact-rational and floating functions")]
    MixedRepresentation,

    /// An index lies outside the data it refers to.
    #[error("index out of range: {0}")]
    OutOfRange(String),

    /// A tree vertex without children was met where the tree must be leafless.
    #[error("leaf encountered at {0}")]
    Leaf(String),

    /// No decaying tail solution exists (|lambda| <= 2) or similar spectral precondition failure.
    #[error("spectral precondition failed: {0}")]
    Spectral(String),
}

pub type Result<T> = std::result::Result<T, Error>;
