use thiserror::Error;

/// Errors raised by the dimer toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The model document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The combinatorial map is malformed (dangling ids, inconsistent rotation, bad colors).
    #[error("structural error at vertex `{vertex}`, edge `{edge}`: {reason}")]
    Structural {
        vertex: String,
        edge: String,
        reason: String,
    },

    /// The model parsed but is not a dimer model on the torus.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// An argument is out of range or refers to something that does not exist.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// An operation was called outside its domain.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An exhaustive routine refused an input above its size cap.
    #[error("capacity exceeded: {what} is {got}, limit {limit}{hint}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
        hint: &'static str,
    },

    /// A mathematical invariant that must hold failed; this indicates a bug or a
    /// counterexample and is never silently ignored.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn structural(
        vertex: impl Into<String>,
        edge: impl Into<String>,
        reason: impl Into<String>,
    ) -> Self {
        Error::Structural {
            vertex: vertex.into(),
            edge: edge.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
