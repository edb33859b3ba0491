use thiserror::Error;

/// Errors raised by the library. Every variant is a contract violation by the
/// caller or a computation that cannot be completed as requested.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bounds ({a}, {b}) outside the domain [0, {length}] or reversed")]
    BadBounds { a: f64, b: f64, length: f64 },

    #[error("coefficient vector has norm {norm}, expected 1")]
    NonUnitCoefficients { norm: f64 },

    #[error("coefficient vector has length {got}, eigenspace dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("rectangles {0} and {1} overlap")]
    OverlappingRects(usize, usize),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("integer overflow in exact arithmetic: {0}")]
    Overflow(String),

    #[error("spectrum does not cover the cutoff {cutoff}: {detail}")]
    InsufficientCoverage { cutoff: f64, detail: String },

    #[error("ambiguous clustering of eigenvalue sums near {value} (tolerance {tolerance:e}); refine the tolerance")]
    AmbiguousCluster { value: f64, tolerance: f64 },

    #[error("exact arithmetic requested but entry {index} has no exact eigenvalue")]
    MissingExact { index: usize },

    #[error("no eigenvalue at or below the cutoff {0}")]
    EmptySpectrum(f64),

    #[error("{0} is not a Dirichlet-square eigenvalue")]
    NotAnEigenvalue(u64),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("the tube covers the whole domain")]
    TubeCoversDomain,
}

pub type Result<T> = std::result::Result<T, Error>;
