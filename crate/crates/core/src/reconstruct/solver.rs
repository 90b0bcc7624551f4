use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{svd, Entry, SvdResult};

/// Default relative singular value cutoff.
pub const DEFAULT_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LsSolveInfo {
    pub rank_used: usize,
    pub svd_cutoff: f64,
    pub residual_norm: f64,
}

/// SVD of `A` kept for repeated minimum-norm least-squares solves.
///
/// Solutions are always formed as `V diag(1/sigma) U^H b` over the retained
/// singular values; the pseudo-inverse itself is never assembled.
#[derive(Debug, Clone)]
pub struct TruncatedSvd<T: Entry> {
    a: DMatrix<T>,
    svd: SvdResult<T>,
}

impl<T: Entry> TruncatedSvd<T> {
    pub fn new(a: DMatrix<T>) -> Result<Self> {
        let svd = svd(&a)?;
        Ok(TruncatedSvd { a, svd })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.a
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.svd.singular_values
    }

    pub fn sigma_max(&self) -> f64 {
        self.svd.sigma_max()
    }

    pub fn sigma_min(&self) -> f64 {
        self.svd.sigma_min()
    }

    /// Number of singular values above `cutoff_rel * sigma_max`.
    pub fn rank(&self, cutoff_rel: f64) -> usize {
        self.svd.rank(cutoff_rel)
    }

    /// `(U_r, sigma_r, V_r)` for the singular values kept at this cutoff.
    pub fn factors(&self, cutoff_rel: f64) -> (DMatrix<T>, Vec<f64>, DMatrix<T>) {
        let r = self.rank(cutoff_rel);
        (
            self.svd.u.columns(0, r).into_owned(),
            self.svd.singular_values[..r].to_vec(),
            self.svd.v.columns(0, r).into_owned(),
        )
    }

    pub fn solve(&self, b: &DVector<Complex64>, cutoff_rel: f64) -> Result<(DVector<Complex64>, LsSolveInfo)> {
        if !(0.0..1.0).contains(&cutoff_rel) {
            return Err(Error::InvalidArgument(format!(
                "cutoff must lie in [0, 1), got {cutoff_rel}"
            )));
        }
        let (rows, cols) = self.a.shape();
        if b.len() != rows {
            return Err(Error::Dimension(format!(
                "right-hand side has length {}, matrix has {rows} rows",
                b.len()
            )));
        }
        let rank = self.rank(cutoff_rel);
        let mut x = DVector::from_element(cols, Complex64::new(0.0, 0.0));
        for i in 0..rank {
            let mut c = Complex64::new(0.0, 0.0);
            for r in 0..rows {
                c += self.svd.u[(r, i)].to_complex().conj() * b[r];
            }
            c /= self.svd.singular_values[i];
            for k in 0..cols {
                x[k] += self.svd.v[(k, i)].to_complex() * c;
            }
        }
        let residual_norm = self.residual(&x, b).norm();
        Ok((
            x,
            LsSolveInfo {
                rank_used: rank,
                svd_cutoff: cutoff_rel,
                residual_norm,
            },
        ))
    }

    /// `b - A x`.
    pub fn residual(&self, x: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
        let (rows, cols) = self.a.shape();
        DVector::from_fn(rows, |r, _| {
            let mut s = b[r];
            for k in 0..cols {
                s -= self.a[(r, k)].to_complex() * x[k];
            }
            s
        })
    }
}

/// Minimum-norm least-squares solution of `A x = b` with singular values below
/// `cutoff_rel * sigma_max` discarded. A zero matrix gives `x = 0` and rank 0.
pub fn ls_solve<T: Entry>(
    a: &DMatrix<T>,
    b: &DVector<Complex64>,
    cutoff_rel: f64,
) -> Result<(DVector<Complex64>, LsSolveInfo)> {
    TruncatedSvd::new(a.clone())?.solve(b, cutoff_rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    fn cv(v: &[f64]) -> DVector<Complex64> {
        DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    #[test]
    fn identity_system() {
        let a = DMatrix::<f64>::identity(3, 3);
        let b = DVector::from_vec(vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(-3.0, 0.5),
            Complex64::new(0.0, 0.0),
        ]);
        let (x, info) = ls_solve(&a, &b, DEFAULT_CUTOFF).unwrap();
        assert!((x - &b).norm() < 1e-15);
        assert_eq!(info.rank_used, 3);
        assert!(info.residual_norm < 1e-15);
    }

    #[test]
    fn cutoff_drops_tiny_direction() {
        let a = dmatrix![1.0, 0.0; 0.0, 1e-20];
        let (x, info) = ls_solve(&a, &cv(&[1.0, 1.0]), 1e-14).unwrap();
        assert_eq!(info.rank_used, 1);
        assert!((x - cv(&[1.0, 0.0])).norm() < 1e-15);
        assert!((info.residual_norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_gives_rank_zero() {
        let a = DMatrix::<f64>::zeros(3, 2);
        let (x, info) = ls_solve(&a, &cv(&[1.0, 2.0, 2.0]), DEFAULT_CUTOFF).unwrap();
        assert_eq!(info.rank_used, 0);
        assert_eq!(x.norm(), 0.0);
        assert!((info.residual_norm - 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let a = DMatrix::<f64>::identity(2, 2);
        assert!(ls_solve(&a, &cv(&[1.0]), 0.0).is_err());
        assert!(ls_solve(&a, &cv(&[1.0, 1.0]), 1.0).is_err());
        assert!(ls_solve(&a, &cv(&[1.0, 1.0]), -0.1).is_err());
    }

    #[test]
    fn minimum_norm_for_wide_system() {
        let a = dmatrix![1.0, 1.0];
        let (x, _) = ls_solve(&a, &cv(&[2.0]), 0.0).unwrap();
        assert!((x - cv(&[1.0, 1.0])).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn consistent_overdetermined_systems(
            entries in proptest::collection::vec(-1.0f64..1.0, 24),
            xs in proptest::collection::vec(-1.0f64..1.0, 4),
        ) {
            let a = DMatrix::from_vec(6, 4, entries);
            let x0 = cv(&xs);
            let b = a.map(|v| Complex64::new(v, 0.0)) * &x0;
            let (_, info) = ls_solve(&a, &b, 0.0).unwrap();
            prop_assert!(info.residual_norm <= 1e-12 * b.norm().max(1e-300) + 1e-300);
        }

        #[test]
        fn residual_is_orthogonal_to_range(
            entries in proptest::collection::vec(-1.0f64..1.0, 30),
            bs in proptest::collection::vec(-1.0f64..1.0, 10),
        ) {
            let a = DMatrix::from_vec(10, 3, entries);
            let b = cv(&bs);
            let t = TruncatedSvd::new(a.clone()).unwrap();
            let (x, _) = t.solve(&b, 0.0).unwrap();
            let r = t.residual(&x, &b);
            let ac = a.map(|v| Complex64::new(v, 0.0));
            let g = ac.adjoint() * r;
            prop_assert!(g.norm() <= 1e-12 * (1.0 + b.norm()));
        }
    }
}
