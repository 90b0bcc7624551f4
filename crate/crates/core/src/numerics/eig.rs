//! Largest eigenvalue of a symmetric-definite pencil `(Z, Zm)`.
//!
//! The Cholesky factor of `Zm` and the reduced matrix `L^{-1} Z L^{-T}` are
//! formed in double-double; only the final symmetric eigenproblem runs in double.

use nalgebra::{DMatrix, SymmetricEigen};

use super::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Largest pencil dimension accepted.
pub const MAX_PENCIL_DIM: usize = 13;

/// Dense square matrix of double-double entries, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DdMatrix {
    n: usize,
    data: Vec<DoubleDouble>,
}

impl DdMatrix {
    pub fn zeros(n: usize) -> Self {
        DdMatrix {
            n,
            data: vec![DoubleDouble::ZERO; n * n],
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> DoubleDouble>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DdMatrix { n, data }
    }

    pub fn from_f64(m: &DMatrix<f64>) -> Self {
        DdMatrix::from_fn(m.nrows(), |i, j| DoubleDouble::from_f64(m[(i, j)]))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> DoubleDouble {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: DoubleDouble) {
        self.data[i * self.n + j] = v;
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_f64())
    }
}

/// Lower Cholesky factor in double-double.
pub fn cholesky_dd(a: &DdMatrix) -> Result<DdMatrix> {
    let n = a.dim();
    let mut l = DdMatrix::zeros(n);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            let v = l.get(j, k);
            d -= v * v;
        }
        if !(d.hi() > 0.0) {
            return Err(Error::NotPositiveDefinite {
                pivot: j,
                value: d.to_f64(),
            });
        }
        let djj = d.sqrt();
        l.set(j, j, djj);
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / djj);
        }
    }
    Ok(l)
}

/// `lambda_max` of `Z x = lambda Zm x` for double inputs.
pub fn gen_sym_eig_max(z: &DMatrix<f64>, zm: &DMatrix<f64>) -> Result<f64> {
    if !z.is_square() || z.shape() != zm.shape() {
        return Err(Error::Dimension(format!(
            "pencil shapes {:?} and {:?}",
            z.shape(),
            zm.shape()
        )));
    }
    gen_sym_eig_max_dd(&DdMatrix::from_f64(z), &DdMatrix::from_f64(zm))
}

/// `lambda_max` of `Z x = lambda Zm x` for double-double inputs.
pub fn gen_sym_eig_max_dd(z: &DdMatrix, zm: &DdMatrix) -> Result<f64> {
    let n = z.dim();
    if zm.dim() != n {
        return Err(Error::Dimension(format!("pencil sizes {n} and {}", zm.dim())));
    }
    if n == 0 {
        return Err(Error::Dimension("empty pencil".into()));
    }
    if n > MAX_PENCIL_DIM {
        return Err(Error::DegreeCap {
            degree: n,
            cap: MAX_PENCIL_DIM,
        });
    }
    let l = cholesky_dd(zm)?;
    // Y = L^{-1} Z, then M = L^{-1} Y^T
    let y = forward_solve(&l, z);
    let mut yt = DdMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            yt.set(i, j, y.get(j, i));
        }
    }
    let m = forward_solve(&l, &yt);
    let mut mf = m.to_f64();
    let sym = (&mf + mf.transpose()) * 0.5;
    mf.copy_from(&sym);
    let eig = SymmetricEigen::new(mf);
    Ok(eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

fn forward_solve(l: &DdMatrix, b: &DdMatrix) -> DdMatrix {
    let n = l.dim();
    let mut x = DdMatrix::zeros(n);
    for c in 0..n {
        for i in 0..n {
            let mut s = b.get(i, c);
            for k in 0..i {
                s -= l.get(i, k) * x.get(k, c);
            }
            x.set(i, c, s / l.get(i, i));
        }
    }
    x
}
