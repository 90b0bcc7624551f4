//! Numerical kernels shared by the rest of the crate.

pub mod bessel;
pub mod dd;
pub mod eig;
pub mod qr_dd;
pub mod quadrature;
pub mod svd;
pub mod zeta;

pub use bessel::{spherical_bessel, spherical_bessel_orders_at_pi_multiple_dd, BesselValue};
pub use dd::{CompensatedSum, DoubleDouble};
pub use eig::{gen_sym_eig_max, gen_sym_eig_max_dd, DdMatrix};
pub use qr_dd::{min_singular_value_dd, DdRect};
pub use quadrature::{gauss_legendre, trapezoid, QuadratureRule, MAX_GAUSS_ORDER};
pub use svd::{adjoint, singular_values, svd, svd_with, Entry, SvdOptions, SvdResult};
pub use zeta::{riemann_zeta, riemann_zeta_dd};
