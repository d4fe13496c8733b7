use thiserror::Error;

/// Errors shared by every module of the library.
///
/// The variants are coarse on purpose: callers mostly need to distinguish
/// "the input was malformed" from "the input was fine but exceeds the
/// declared resource limits" from "a documented precondition was violated".
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (group spec, element, set expression, ...).
    #[error("parse error: {0}")]
    Parse(String),

    /// Two values that must live over the same group (or the same action)
    /// do not.
    #[error("mismatched group or action: {0}")]
    Mismatch(String),

    /// The input is valid but outside the declared resource limits, or a
    /// computation hit an internal work cap.  Results are never silently
    /// truncated; this error is raised instead.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// The requested operation only makes sense for a finite group.
    #[error("unsupported for infinite group: {0}")]
    InfiniteGroup(String),

    /// A documented precondition of the operation was violated
    /// (empty set where a non-empty one is required, non-invariant set,
    /// condition status that does not match, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
