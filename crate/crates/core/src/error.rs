use thiserror::Error;

/// Errors shared by oracles, step rules and runners.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric computation failed (non-finite values, non-convergence,
    /// degenerate denominators).
    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// A caller violated a documented precondition.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The requested operation is not supported for this region or objective.
    #[error("unsupported capability: {0}")]
    Capability(String),

    /// Invalid configuration (bad field value, unresolvable reference).
    #[error("invalid config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
