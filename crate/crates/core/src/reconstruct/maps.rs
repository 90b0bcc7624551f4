use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::solver::{LsSolveInfo, TruncatedSvd, DEFAULT_CUTOFF};
use crate::error::{Error, Result};
use crate::fourier::{exponential_coefficient, CoeffVec};
use crate::polyspace::{legendre_fourier_matrix, LegendrePoly};

fn rhs(c: &CoeffVec) -> DVector<Complex64> {
    DVector::from_column_slice(c.values())
}

/// Square solve that refuses systems with no correct digits left.
fn solve_square(a: DMatrix<Complex64>, b: &DVector<Complex64>) -> Result<(DVector<Complex64>, LsSolveInfo)> {
    let t = TruncatedSvd::new(a)?;
    let kappa = t.sigma_max() / t.sigma_min();
    if !(kappa * f64::EPSILON < 1.0) {
        return Err(Error::IllConditioned { kappa });
    }
    t.solve(b, 0.0)
}

/// The polynomial of degree `2m` whose coefficients `|j| <= m` equal `c`.
pub fn iprm(c: &CoeffVec) -> Result<(LegendrePoly<Complex64>, LsSolveInfo)> {
    let m = c.m();
    let a = legendre_fourier_matrix(2 * m, m)?;
    let (x, info) = solve_square(a, &rhs(c))?;
    Ok((LegendrePoly::new(x.as_slice().to_vec())?, info))
}

/// Least-squares fit by a polynomial of degree `2n` to the coefficients `|j| <= m`.
pub fn poly_ls(c: &CoeffVec, n: usize) -> Result<(LegendrePoly<Complex64>, LsSolveInfo)> {
    let m = c.m();
    if n > m {
        return Err(Error::InvalidArgument(format!(
            "polynomial least squares needs n <= m, got n = {n}, m = {m}"
        )));
    }
    let a = legendre_fourier_matrix(2 * n, m)?;
    let t = TruncatedSvd::new(a)?;
    let (x, info) = t.solve(&rhs(c), 0.0)?;
    Ok((LegendrePoly::new(x.as_slice().to_vec())?, info))
}

fn check_extension(t: f64) -> Result<()> {
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "extension half-length must be finite and exceed 1, got {t}"
        )));
    }
    Ok(())
}

/// Coefficients `|j| <= m` of `e^{i k pi x / T}`, `|k| <= n`.
///
/// The entries `sqrt 2 sinc(pi (k/T - j))` are real.
pub fn fe_matrix(n: usize, m: usize, t: f64) -> Result<DMatrix<f64>> {
    check_extension(t)?;
    let (mi, ni) = (m as i64, n as i64);
    Ok(DMatrix::from_fn(2 * m + 1, 2 * n + 1, |r, c| {
        let j = r as i64 - mi;
        let k = c as i64 - ni;
        exponential_coefficient(k as f64 / t, j)
    }))
}

/// `x -> sum_{|k| <= n} a_k e^{i k pi x / T}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionFn {
    pub t: f64,
    pub n: usize,
    /// `a[k + n] = a_k`.
    pub a: Vec<Complex64>,
}

impl ExtensionFn {
    pub fn new(t: f64, n: usize, a: Vec<Complex64>) -> Result<Self> {
        check_extension(t)?;
        if a.len() != 2 * n + 1 {
            return Err(Error::Dimension(format!(
                "degree {n} needs {} coefficients, got {}",
                2 * n + 1,
                a.len()
            )));
        }
        Ok(ExtensionFn { t, n, a })
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.a[(k + self.n as i64) as usize]
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let ni = self.n as i64;
        let w = std::f64::consts::PI * x / self.t;
        self.a
            .iter()
            .enumerate()
            .map(|(i, &c)| c * Complex64::cis((i as i64 - ni) as f64 * w))
            .sum()
    }

    /// Fourier coefficients on `[-1, 1]`, `|j| <= m`.
    pub fn fourier_coeffs(&self, m: usize) -> Result<CoeffVec> {
        let e = fe_matrix(self.n, m, self.t)?;
        let a = DVector::from_column_slice(&self.a);
        let v = e.map(|x| Complex64::new(x, 0.0)) * a;
        CoeffVec::new(m, v.as_slice().to_vec())
    }
}

/// Least-squares fit from `S_n` on `[-T, T]` with the default cutoff.
pub fn fourier_extension(c: &CoeffVec, n: usize, t: f64) -> Result<(ExtensionFn, LsSolveInfo)> {
    fourier_extension_with_cutoff(c, n, t, DEFAULT_CUTOFF)
}

pub fn fourier_extension_with_cutoff(
    c: &CoeffVec,
    n: usize,
    t: f64,
    cutoff_rel: f64,
) -> Result<(ExtensionFn, LsSolveInfo)> {
    let e = fe_matrix(n, c.m(), t)?;
    let (x, info) = TruncatedSvd::new(e)?.solve(&rhs(c), cutoff_rel)?;
    Ok((ExtensionFn::new(t, n, x.as_slice().to_vec())?, info))
}
