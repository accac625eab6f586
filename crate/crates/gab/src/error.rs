//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by metric evaluation and the numerical probes.
#[derive(Debug, Clone, Error)]
pub enum GabError {
    /// Input lies outside the declared domain of a function or metric.
    #[error("domain error: {0}")]
    Domain(String),

    /// A complex square root landed on the closed negative real axis,
    /// where the principal branch is discontinuous.
    #[error("branch cut: {0}")]
    Branch(String),

    /// The direction vector `y` is zero; `F(x, 0)` is not defined.
    #[error("degenerate direction: y = 0")]
    DegenerateDirection,

    /// A Finsler-validity denominator vanished or turned negative, so the
    /// fundamental tensor cannot be inverted at this point.
    #[error("singular fundamental tensor: {0}")]
    SingularTensor(String),

    /// The finite-difference oracle failed its Richardson consistency
    /// check (results at step h and h/2 disagree too much).
    #[error("finite-difference step unreliable: {0}")]
    StepTooLarge(String),

    /// The geodesic integrator's invariant monitor `F(x, ẋ)` drifted by
    /// more than 10%, signalling an unstable step size.
    #[error("integration instability: {0}")]
    StepInstability(String),

    /// A structural precondition of a specialized formula is not met
    /// (e.g. β is not closed, or φ does not solve the flatness PDE).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Malformed configuration input.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, GabError>;
