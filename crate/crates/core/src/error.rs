use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("sample count mismatch: grid has {expected} points, got {got} values")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("grids differ: {0}")]
    GridMismatch(String),

    #[error(
        "input is not band limited after Gaussian damping: spectral tail {tail:.3e} exceeds {limit:.1e}"
    )]
    SpectralTail { tail: f64, limit: f64 },

    #[error("growth guard: multiplier magnitude {magnitude:.3e} exceeds {limit:.1e}")]
    Growth { magnitude: f64, limit: f64 },

    #[error("integration window leaves the grid: {0}")]
    Window(String),

    #[error("overflow guard: {0}")]
    Overflow(String),

    #[error("insufficient decay: {0}")]
    Decay(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
