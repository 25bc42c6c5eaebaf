use std::fmt;

/// Why a requested state has no bound-state solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoBoundReason {
    /// The Lambert argument of the exponential energy formula fell below `-1/e`.
    StateNotAllowed,
    /// The closed-form energy is zero or positive.
    NonNegativeEnergy,
    /// The numeric solver found fewer bound levels than requested.
    NotFound,
}

impl NoBoundReason {
    pub fn code(self) -> &'static str {
        match self {
            NoBoundReason::StateNotAllowed => "state-not-allowed",
            NoBoundReason::NonNegativeEnergy => "non-negative-energy",
            NoBoundReason::NotFound => "not-found",
        }
    }
}

impl fmt::Display for NoBoundReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no real solution: {0}")]
    NoSolution(String),
    #[error("no bound state ({0})")]
    NoBoundState(NoBoundReason),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
