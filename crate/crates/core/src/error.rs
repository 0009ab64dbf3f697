//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, validation, and estimation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or tensor-factor dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A numeric parameter is outside its admissible range.
    #[error("parameter out of range: {0}")]
    Parameter(String),

    /// A quantity that must be (near-)real or (near-)zero is not.
    #[error("numerical check failed: {0}")]
    Numerical(String),

    /// Group closure kept producing new elements past the safety bound,
    /// which signals a bug in the generating set.
    #[error("group closure exceeded the safety bound of {bound} elements")]
    GroupClosure { bound: usize },

    /// SPAM noise has destroyed the distinguishability of the two basis
    /// preparations, so the ratio estimator is undefined.
    #[error("degenerate SPAM: |q2 - q3| = {separation:.3e} is below tolerance {tolerance:.3e}")]
    DegenerateSpam { separation: f64, tolerance: f64 },

    /// A set of Kraus operators does not describe a CPTP map.
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    /// A channel spec string or JSON document could not be parsed.
    #[error("cannot parse channel spec: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
