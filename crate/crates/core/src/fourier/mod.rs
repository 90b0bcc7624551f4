//! Fourier coefficients on `[-1, 1]` under the `1/sqrt(2)` normalization,
//! the analytic test-function families, and the two norms used throughout.

mod coeff_vec;
mod functions;
mod quadrature_coeffs;

pub use coeff_vec::CoeffVec;
pub use functions::{BernsteinRadius, TestFunction};
pub use quadrature_coeffs::{coeffs_by_quadrature, CoeffQuadrature};
pub(crate) use quadrature_coeffs::sin_cos_pi_product;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

/// Default Gauss–Legendre order for error norms.
pub const DEFAULT_NORM_NODES: usize = 1000;

/// `(1/sqrt 2) sum_{|j| <= m} c_j e^{i j pi x}`.
pub fn evaluate_truncated_series(c: &CoeffVec, x: f64) -> Complex64 {
    c.evaluate(x)
}

/// `sqrt(sum |c_j|^2)`.
pub fn norm_m(c: &CoeffVec) -> f64 {
    c.norm()
}

/// `||g||_2` on `[-1, 1]` by the `n`-point Gauss–Legendre rule.
///
/// Non-finite values of `g` propagate into the result.
pub fn norm_l2<F: Fn(f64) -> Complex64>(g: F, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "norm quadrature needs at least 2 nodes, got {n}"
        )));
    }
    let rule = gauss_legendre(n)?;
    Ok(rule.integrate(|x| g(x).norm_sqr()).sqrt())
}

/// Fourier coefficient of `x -> e^{i omega pi x}` at index `j`, i.e.
/// `sqrt 2 * sinc(pi (omega - j))`.
pub fn exponential_coefficient(omega: f64, j: i64) -> f64 {
    std::f64::consts::SQRT_2 * sinc_pi(omega - j as f64)
}

/// `sin(pi t) / (pi t)` with exact argument reduction and `sinc(0) = 1`.
pub fn sinc_pi(t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    sin_pi(t) / (std::f64::consts::PI * t)
}

/// `sin(pi t)`, exact at integers.
pub fn sin_pi(t: f64) -> f64 {
    // reduce to r in [-1, 1]; t - 2 round(t/2) is exact in binary floating point
    let r = t - 2.0 * (0.5 * t).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0f64.copysign(r);
    }
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (std::f64::consts::PI * r).sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn l2_norms_of_simple_functions() {
        let one = norm_l2(|_| Complex64::new(1.0, 0.0), 1000).unwrap();
        assert!((one - SQRT_2).abs() < 1e-14);
        let x = norm_l2(|x| Complex64::new(x, 0.0), 1000).unwrap();
        assert!((x - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        let c = norm_l2(|x| Complex64::new((PI * x).cos(), 0.0), 1000).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
        assert!(norm_l2(|x| Complex64::new(x, 0.0), 1).is_err());
        assert!(norm_l2(|_| Complex64::new(f64::NAN, 0.0), 10).unwrap().is_nan());
    }

    #[test]
    fn sin_pi_is_exact_on_integers_and_halves() {
        for k in -50..50 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(sin_pi(-1.5), 1.0);
        assert!((sin_pi(0.25) - (PI / 4.0).sin()).abs() < 1e-16);
        assert!((sin_pi(1e6 + 0.25) - (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn exponential_coefficients() {
        assert_eq!(exponential_coefficient(0.0, 0), SQRT_2);
        assert_eq!(exponential_coefficient(1.0, 1), SQRT_2);
        assert_eq!(exponential_coefficient(1.0, 3), 0.0);
        assert!((exponential_coefficient(0.5, 0) - 2.0 * SQRT_2 / PI).abs() < 1e-15);
    }
}
