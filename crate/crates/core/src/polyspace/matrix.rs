use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::legendre::orthonormal_legendre_values;
use crate::error::{Error, Result};
use crate::fourier::sin_cos_pi_product;
use crate::numerics::bessel::spherical_bessel_orders_at_pi_multiple;
use crate::numerics::{
    gauss_legendre, spherical_bessel_orders_at_pi_multiple_dd, CompensatedSum, DdRect, DoubleDouble,
    MAX_GAUSS_ORDER,
};

/// Agreement required between the Bessel and quadrature paths.
pub const CONSISTENCY_TOL: f64 = 1e-11;

/// `(-i)^k`.
pub fn minus_i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `sqrt(2k+1) j_k(pi j)` for `k = 0..=n`, `j >= 0`.
fn real_row(n: usize, j: u64) -> Result<Vec<f64>> {
    if j == 0 {
        let mut r = vec![0.0; n + 1];
        r[0] = 1.0;
        return Ok(r);
    }
    let mut r = spherical_bessel_orders_at_pi_multiple(n, j)?;
    for (k, v) in r.iter_mut().enumerate() {
        *v *= ((2 * k + 1) as f64).sqrt();
    }
    Ok(r)
}

/// The real matrix `R` with `A = R diag((-i)^k)`; rows `j = -m..=m`.
pub fn legendre_fourier_real(n: usize, m: usize) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = (0..=m as u64)
        .into_par_iter()
        .map(|j| real_row(n, j))
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(2 * m + 1, n + 1, |r, k| {
        let j = r as i64 - m as i64;
        let v = rows[j.unsigned_abs() as usize][k];
        if j < 0 && k % 2 == 1 {
            -v
        } else {
            v
        }
    }))
}

/// Fourier coefficients of `Pbar_0..Pbar_n` from spherical Bessel values.
pub fn legendre_fourier_bessel(n: usize, m: usize) -> Result<DMatrix<Complex64>> {
    let r = legendre_fourier_real(n, m)?;
    Ok(DMatrix::from_fn(r.nrows(), r.ncols(), |i, k| {
        minus_i_pow(k) * r[(i, k)]
    }))
}

/// Fourier coefficients of `Pbar_0..Pbar_n` by a single Gauss–Legendre rule
/// long enough to resolve `e^{-i m pi x}`.
pub fn legendre_fourier_quadrature(n: usize, m: usize) -> Result<DMatrix<Complex64>> {
    let order = (n / 2 + 3 * m + 40).min(MAX_GAUSS_ORDER);
    let rule = gauss_legendre(order)?;
    let basis: Vec<Vec<f64>> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| {
            let mut p = orthonormal_legendre_values(n, x);
            for v in p.iter_mut() {
                *v *= w;
            }
            p
        })
        .collect();
    let rows: Vec<Vec<Complex64>> = (0..=m)
        .into_par_iter()
        .map(|j| {
            let trig: Vec<(f64, f64)> = rule
                .nodes()
                .iter()
                .map(|&x| sin_cos_pi_product(j as f64, x))
                .collect();
            (0..=n)
                .map(|k| {
                    let mut re = CompensatedSum::new();
                    let mut im = CompensatedSum::new();
                    for (b, &(s, c)) in basis.iter().zip(&trig) {
                        re.add_product(b[k], c);
                        im.add_product(-b[k], s);
                    }
                    Complex64::new(re.value(), im.value()) * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect()
        })
        .collect();
    Ok(DMatrix::from_fn(2 * m + 1, n + 1, |r, k| {
        let j = r as i64 - m as i64;
        let v = rows[j.unsigned_abs() as usize][k];
        if j < 0 {
            v.conj()
        } else {
            v
        }
    }))
}

/// The `(2m+1) x (n+1)` Legendre–Fourier matrix, rows `j = -m..=m`.
///
/// Computed from spherical Bessel values and verified entrywise against
/// quadrature.
pub fn legendre_fourier_matrix(n: usize, m: usize) -> Result<DMatrix<Complex64>> {
    let a = legendre_fourier_bessel(n, m)?;
    let q = legendre_fourier_quadrature(n, m)?;
    let mut worst = (0.0, 0, 0);
    for k in 0..a.ncols() {
        for i in 0..a.nrows() {
            let d = (a[(i, k)] - q[(i, k)]).norm();
            if d > worst.0 {
                worst = (d, i, k);
            }
        }
    }
    if worst.0 > CONSISTENCY_TOL {
        return Err(Error::Consistency(format!(
            "Legendre–Fourier entry (j={}, k={}) differs by {:.3e} between the Bessel and quadrature paths",
            worst.1 as i64 - m as i64,
            worst.2,
            worst.0
        )));
    }
    Ok(a)
}

/// Real blocks with the same singular values as the Legendre–Fourier matrix.
///
/// Rows `j` and `-j` are combined into `(e_j + e_{-j})/sqrt 2` and
/// `(e_j - e_{-j})/sqrt 2`, which separates even and odd degrees.
#[derive(Debug, Clone)]
pub struct ParityBlocks {
    /// Rows `j = 0..=m`, columns `k = 0, 2, 4, ...`.
    pub even: DMatrix<f64>,
    /// Rows `j = 1..=m`, columns `k = 1, 3, 5, ...`.
    pub odd: DMatrix<f64>,
}

pub fn parity_blocks(n: usize, m: usize) -> Result<ParityBlocks> {
    let rows: Vec<Vec<f64>> = (0..=m as u64)
        .into_par_iter()
        .map(|j| real_row(n, j))
        .collect::<Result<_>>()?;
    let ne = n / 2 + 1;
    let no = (n + 1) / 2;
    let s2 = std::f64::consts::SQRT_2;
    let even = DMatrix::from_fn(m + 1, ne, |j, c| {
        let v = rows[j][2 * c];
        if j == 0 {
            v
        } else {
            s2 * v
        }
    });
    let odd = DMatrix::from_fn(m, no, |j, c| s2 * rows[j + 1][2 * c + 1]);
    Ok(ParityBlocks { even, odd })
}

/// [`parity_blocks`] with entries in double-double: `(even, odd)`.
pub fn parity_blocks_dd(n: usize, m: usize) -> Result<(DdRect, DdRect)> {
    let rows: Vec<Vec<DoubleDouble>> = (0..=m as u64)
        .into_par_iter()
        .map(|j| {
            if j == 0 {
                let mut r = vec![DoubleDouble::ZERO; n + 1];
                r[0] = DoubleDouble::ONE;
                return Ok(r);
            }
            let mut r = spherical_bessel_orders_at_pi_multiple_dd(n, j)?;
            for (k, v) in r.iter_mut().enumerate() {
                // sqrt 2 * sqrt(2k+1)
                *v = *v * DoubleDouble::from_f64((4 * k + 2) as f64).sqrt();
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let ne = n / 2 + 1;
    let no = (n + 1) / 2;
    // row 0 is already the unscaled unit vector
    let even = DdRect::from_fn(m + 1, ne, |j, c| rows[j][2 * c]);
    let odd = DdRect::from_fn(m, no, |j, c| rows[j + 1][2 * c + 1]);
    Ok((even, odd))
}
