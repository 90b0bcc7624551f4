//! Reconstruction of analytic, non-periodic functions on `[-1, 1]` from their
//! first `2m + 1` Fourier coefficients.
//!
//! The crate computes the stability constant `B_{n,m}` of polynomial recovery
//! and its lower bounds, implements polynomial least squares, the inverse
//! polynomial reconstruction method and Fourier extensions on one truncated-SVD
//! solver, estimates their condition numbers, and drives the experiments that
//! compare them.

pub mod conditioning;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod framebound;
pub mod numerics;
pub mod polyspace;
pub mod reconstruct;

pub use error::{Error, Result};
pub use num_complex::Complex64;
