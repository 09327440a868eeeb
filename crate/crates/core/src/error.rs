//! Error type shared by all computation modules.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Unknown or unsupported finite type symbol / rank combination.
    #[error("invalid type: {0}")]
    InvalidType(String),

    /// A precondition on the inputs failed (wrong level, non-dominant weight, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Simple-reflection index outside 0..=r (or 1..=r for finite types).
    #[error("node index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    /// A computation would need data beyond the requested truncation depth.
    #[error("depth exceeded: needed {needed}, truncated at {depth}")]
    DepthExceeded { needed: i64, depth: i64 },

    /// A weight space would exceed the configured dimension ceiling.
    #[error("resource guard: weight space of dimension {dim} exceeds ceiling {limit}")]
    ResourceGuard { dim: usize, limit: usize },

    /// Affine enumeration requires positive level.
    #[error("level must be positive for affine Weyl enumeration")]
    NonPositiveLevel,

    /// Inconsistent combinatorial data (quiver dims, diagram constraints, ...).
    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    /// An internal exact-arithmetic certification failed; indicates a bug.
    #[error("internal certification failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
