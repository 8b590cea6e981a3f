//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by channel evaluation, the optimizers and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// A value lies outside the mathematical domain of an operation
    /// (e.g. a negative SNR passed to `capacity`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-supplied parameter violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A power allocation does not satisfy the per-user power equalities
    /// for the given phase durations.
    #[error("infeasible allocation: {0}")]
    InfeasibleAllocation(String),

    /// A channel gain required by a closed form is zero.
    #[error("singular channel: {0}")]
    SingularChannel(String),

    /// A phase duration makes the requested case undefined
    /// (e.g. a cooperative case with no exchange phase).
    #[error("degenerate phase: {0}")]
    DegeneratePhase(String),

    /// A root finder or validation step failed beyond recovery.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Two nodes of a topology coincide.
    #[error("singular topology: {0}")]
    SingularTopology(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for bad input, 1 for numerical trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalFailure(_) => 1,
            _ => 2,
        }
    }
}
