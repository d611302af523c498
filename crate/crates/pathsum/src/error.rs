use thiserror::Error;

use crate::path::Space;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("non-finite {what}")]
    NonFinite { what: &'static str },

    #[error("path requires at least 2 points, got {got}")]
    TooFewPoints { got: usize },

    #[error("operation requires a path on {expected:?}, got {got:?}")]
    SpaceMismatch { expected: &'static str, got: Space },

    /// The coordinate trace looks reduced mod 2π rather than unwrapped, so
    /// winding information is not recoverable.
    #[error(
        "ring coordinates appear wrapped mod 2π; winding requires the unwrapped representation"
    )]
    WrappedAngles,

    #[error("degenerate geometry: {reason}")]
    DegenerateGeometry { reason: String },

    #[error("degenerate amplitude: {reason}")]
    DegenerateAmplitude { reason: String },

    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("no event records supplied")]
    EmptyRecords,

    #[error("{what}: requested {requested} exceeds cap {cap}")]
    ResourceCap {
        what: &'static str,
        requested: u64,
        cap: u64,
    },
}

impl Error {
    pub fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            reason: reason.into(),
        }
    }

    /// True for errors caused by a configured work-size cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}
