//! Error type shared by all modules of the crate.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Bad resolution, schedule, or other run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation precondition does not hold for the given inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The body kind cannot support the requested operation.
    #[error("operation `{op}` is not supported for body kind `{kind}`")]
    UnsupportedKind { op: &'static str, kind: &'static str },

    /// The exponent p is at (or too close to) the pole p = -n.
    #[error("exponent p = {p} is within 1e-6 of the pole -n = {pole}")]
    ExponentPole { p: f64, pole: f64 },

    /// A construction could not produce a valid convex body.
    #[error("invalid body: {0}")]
    InvalidBody(String),

    /// Geometric construction failure (tangency, intersection, ...).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A floating/surface body construction collapsed to the empty set.
    #[error("degenerate body: {0}")]
    Degenerate(String),

    /// An internal solver failed to bracket or converge.
    #[error("internal numeric failure: {0}")]
    Numeric(String),
}
