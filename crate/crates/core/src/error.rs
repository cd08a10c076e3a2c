//! Error type shared by every module of the library.

use thiserror::Error;

/// Failures reported by the library.
///
/// Variants are split along the line the command-line front end needs: input
/// that cannot be parsed or is structurally invalid, requests outside a
/// supported bound, and genuine domain failures such as a non-prime pattern.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A graph violates a structural invariant or an operation precondition.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    /// A tree violates a structural invariant or an operation precondition.
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    /// Textual input (JSON, S-expression, class name) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// The request exceeds a size bound of an exhaustive or exact routine.
    #[error("{what}: size {size} exceeds the supported bound {bound}")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    /// The request is well formed but mathematically meaningless here.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical procedure failed to converge or to bracket a root.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
