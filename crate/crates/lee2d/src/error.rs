//! Crate-wide error type.

/// Everything that can go wrong while building parameters or evaluating the
/// numerical pipeline. Variants carry the offending values so callers can
/// produce actionable diagnostics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("masses must be positive, got M = {m_n}, m = {m_theta}")]
    NonPositiveMass { m_n: f64, m_theta: f64 },

    #[error("bare coupling g0 must be non-negative, got {0}")]
    NegativeCoupling(f64),

    #[error("form-factor cutoff must be positive and finite, got {0}")]
    NonPositiveCutoff(f64),

    #[error("evaluation point violates its variant constraint: {0}")]
    InvalidEvaluationPoint(&'static str),

    #[error("self-energy integral diverges (local form factor on the bare path)")]
    DivergentIntegral,

    #[error("quadrature did not reach tolerance {tolerance:.3e}, best error {error:.3e}")]
    QuadratureFailure { tolerance: f64, error: f64 },

    #[error("bound-state energy must be positive, got {0}")]
    InvalidBoundState(f64),

    #[error("relative momentum q = {q} collides with the on-shell point k = {k}")]
    OnShellSingularity { q: f64, k: f64 },

    #[error("no bound-state root exists for these couplings")]
    NoRoot,

    #[error("renormalized coupling {g_sq} lies outside [0, 2 pi E0 / mu] = [0, {bound}]")]
    OutOfRange { g_sq: f64, bound: f64 },

    #[error("contact-limit ratio lambda requires U0 > 0, got {0}")]
    NonPositiveU0(f64),

    #[error("coupling grid is degenerate: {0}")]
    DegenerateGrid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
