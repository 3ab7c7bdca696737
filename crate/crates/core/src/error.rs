use thiserror::Error;

/// Errors raised by the geometry, controller, simulator and file layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Three points that should span a plane are (numerically) collinear.
    #[error("degenerate plane: points are collinear (gram determinant {gram:e})")]
    DegeneratePlane { gram: f64 },

    /// A scenario or simulator parameter violates its invariant.
    #[error("invalid `{key}`: {reason}")]
    Invalid { key: String, reason: String },

    /// A configuration file could not be parsed or validated.
    #[error("{path}: {message}")]
    Config { path: String, message: String },

    /// The jump map returned no admissible mode.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
