use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structurally invalid input (bad count, empty list, malformed certificate).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested work exceeds a resource guard.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("unknown function label `{0}` (expected f1 or f2)")]
    UnknownFunction(String),

    #[error("unknown strategy `{0}` (expected standard, new1, new2, corollary or all)")]
    UnknownStrategy(String),

    /// A grid does not belong to the certificate or strategy it was paired with.
    #[error("grid mismatch: {0}")]
    Mismatch(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
