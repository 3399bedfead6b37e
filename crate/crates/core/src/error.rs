use thiserror::Error;

/// Errors surfaced by state algebra, channel evolution and bound construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "matrix is not Hermitian (deviation {deviation:.3e} exceeds tolerance {tolerance:.1e})"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace is {trace:.12} but must be 1 within {tolerance:.1e}")]
    InvalidTrace { trace: f64, tolerance: f64 },

    #[error("matrix has a non-finite entry")]
    NonFiniteEntry,

    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature failed to reach tolerance {tolerance:.1e} on [{a}, {b}] (error estimate {estimate:.3e})")]
    QuadratureTolerance {
        a: f64,
        b: f64,
        tolerance: f64,
        estimate: f64,
    },

    #[error("divergent quantum Fisher information: derivative has weight {weight:.3e} on a null subspace")]
    DivergentQfi { weight: f64 },

    #[error(
        "degenerate bound: zero average speed with nonzero numerator {numerator:.3e} at t = {t}"
    )]
    DegenerateBound { t: f64, numerator: f64 },

    #[error("tau_cri not reached: witness stays above epsilon up to t_max = {t_max}")]
    TauCriNotReached { t_max: f64 },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
