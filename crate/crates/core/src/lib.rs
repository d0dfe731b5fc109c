//! Numerical laboratory for the logarithm of the pure braid generator.
//!
//! The pure braid group on two strands is infinite cyclic, generated by a
//! full twist `q`. Square-summable formal sums `Σ c_n q^n` form the sequence
//! space ℓ²(ℤ), multiplied by convolution. The sequence
//!
//! ```text
//! τ = Σ_{n≥1} (-1)^{n+1} (q^n - q^{-n}) / n
//! ```
//!
//! has Fourier function `iθ` on `[-π, π]`, so its convolution exponential is
//! `q` itself. This crate builds `τ` on finite windows, evaluates the
//! exponential series by truncated convolution, and checks the outcome
//! against closed-form and quadrature Fourier oracles.
//!
//! Modules:
//! - [`seq`]: windowed two-sided coefficient sequences.
//! - [`conv`]: direct and FFT convolution, clamped convolution powers.
//! - [`fourier`]: Fourier coefficients of `(iθ)^m` and Parseval pairings.
//! - [`braidexp`]: `τ`, the sequence exponential, Vassiliev values and
//!   the reconstruction `b = Σ ψ_i(Z_i(b))` on two strands.
//! - [`cli`]: the command-line front end.

pub mod braidexp;
pub mod cli;
pub mod conv;
pub mod error;
pub mod fourier;
pub mod seq;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use seq::CoeffSeq;
