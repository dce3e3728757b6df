//! Error types shared by all simulator modules.

use thiserror::Error;

/// Failure modes of scenario construction, synthesis, and phase control.
#[derive(Debug, Clone, Error)]
pub enum SimError {
    /// An input value is outside the physical or mathematical domain of the
    /// operation (non-positive distance, angle at a singularity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Arguments violate a structural contract between components (plan and
    /// scenario disagree on RIS count, strategy applied to the wrong
    /// scenario shape, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A configurable resource limit would be exceeded (permutation search
    /// cap).
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
