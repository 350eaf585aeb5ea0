use thiserror::Error;

/// Errors reported by the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    /// A parameter left its admissible region. `constraint` names the violated rule.
    #[error("parameter out of range: {constraint}")]
    ParameterRange { constraint: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The time stepper produced a non-finite state.
    #[error("numerical blow-up at step {step} (t = {time}){}", seed.map(|s| format!(", seed {s}")).unwrap_or_default())]
    BlowUp { step: usize, time: f64, seed: Option<u64> },
}

impl Error {
    pub(crate) fn range(constraint: impl Into<String>) -> Self {
        Error::ParameterRange { constraint: constraint.into() }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
