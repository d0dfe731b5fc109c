use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("window cap {cap} is smaller than the input radius {radius}")]
    CapTooSmall { cap: usize, radius: usize },

    #[error("coefficient vector has {len} entries, expected {expected} for radius {radius}")]
    WindowLength {
        radius: usize,
        len: usize,
        expected: usize,
    },

    #[error("coefficient at index {index} is not finite")]
    NonFinite { index: i64 },

    #[error("Vassiliev value has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error(
        "quadrature for c_{n}((iθ)^{m}) did not converge: \
         half/full resolution differ by {diff:e} > tolerance {tolerance:e}"
    )]
    QuadratureNotConverged {
        n: i64,
        m: u32,
        diff: f64,
        tolerance: f64,
    },

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error("probe index {probe} lies outside the window [-{cap}, {cap}]")]
    ProbeOutsideWindow { probe: i64, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
