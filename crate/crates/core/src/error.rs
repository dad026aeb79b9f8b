use thiserror::Error;

/// Errors produced by the geometry, assembly and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point outside the surface domain: rho = {0} (must be > 0)")]
    Domain(f64),
    #[error("non-finite surface derivative at rho = {rho}: {what}")]
    NonFinite { rho: f64, what: &'static str },
    #[error("invalid torus radii a = {a}, R = {major}: need 0 < a < R")]
    InvalidRadii { a: f64, major: f64 },
    #[error("aspect ratio {0} outside (0, 1)")]
    InvalidAlpha(f64),
    #[error("truncation N = {0} below the minimum of 4")]
    InvalidTruncation(usize),
    #[error("quadrature grid of {0} points is too small (need a power of two >= 1024)")]
    GridTooSmall(usize),
    #[error("eigenvalue {re} + {im}i is not real; the operator pair is inconsistent")]
    NonRealSpectrum { re: f64, im: f64 },
    #[error("eigensolver failed: {0}")]
    SolverFailure(String),
    #[error("cannot normalize a zero coefficient vector")]
    ZeroVector,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
