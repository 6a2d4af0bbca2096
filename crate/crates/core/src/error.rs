use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested formula or enumerator.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested enumeration exceeds the configured size limit.
    #[error("capacity exceeded: requested size {requested} but the limit is {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("invalid forest: {0}")]
    Invalid(#[from] Violation),

    #[error("forest is not special")]
    NotSpecial,

    /// A mathematical invariant failed to hold. Reaching this is a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
