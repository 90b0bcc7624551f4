//! Polynomials in the orthonormal Legendre basis, their Fourier coefficients,
//! and the extremal witness polynomial.

mod correspondence;
mod legendre;
mod matrix;
mod witness;

pub use correspondence::{endpoint_correspondence, TPolyCoeffs, MAX_CORRESPONDENCE_DEGREE};
pub use legendre::{
    legendre_derivative_at_minus_one, legendre_derivative_at_one, orthonormal_legendre_values,
    LegendrePoly,
};
pub use matrix::{
    legendre_fourier_bessel, legendre_fourier_matrix, legendre_fourier_quadrature,
    legendre_fourier_real, minus_i_pow, parity_blocks, parity_blocks_dd, ParityBlocks,
    CONSISTENCY_TOL,
};
pub use witness::{build_witness, chebyshev, eval_chebyshev_shifted, WitnessPoly, MAX_MONOMIAL_Q};
