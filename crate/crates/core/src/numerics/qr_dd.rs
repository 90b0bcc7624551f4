//! Smallest singular value of a real matrix held in double-double.
//!
//! `A = QR` by Householder reflections in double-double, then
//! `sigma_min(A) = 1 / sigma_max(R^{-1})`. The inverse is formed in
//! double-double and rounded once, so the final double SVD only has to get the
//! largest singular value right.

use nalgebra::DMatrix;

use super::dd::DoubleDouble;
use super::svd::singular_values;
use crate::error::{Error, Result};

/// Dense rectangular double-double matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DdRect {
    rows: usize,
    cols: usize,
    data: Vec<DoubleDouble>,
}

impl DdRect {
    pub fn from_fn<F: FnMut(usize, usize) -> DoubleDouble>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DdRect { rows, cols, data }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> DoubleDouble {
        self.data[i * self.cols + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: DoubleDouble) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64())
    }
}

/// Upper triangular factor of the Householder QR of `a` (`rows >= cols`).
fn householder_r(a: &DdRect) -> DdRect {
    let (rows, cols) = a.shape();
    let mut w = a.clone();
    for c in 0..cols {
        let mut s = DoubleDouble::ZERO;
        for i in c..rows {
            let v = w.get(i, c);
            s += v * v;
        }
        let norm = s.sqrt();
        if norm.hi() == 0.0 {
            continue;
        }
        let x0 = w.get(c, c);
        let alpha = if x0.hi() < 0.0 { norm } else { -norm };
        // v = x - alpha e1, H = I - 2 v v^T / (v^T v)
        let mut v: Vec<DoubleDouble> = (c..rows).map(|i| w.get(i, c)).collect();
        v[0] -= alpha;
        let mut vtv = DoubleDouble::ZERO;
        for &x in &v {
            vtv += x * x;
        }
        for k in c + 1..cols {
            let mut d = DoubleDouble::ZERO;
            for (i, &x) in v.iter().enumerate() {
                d += x * w.get(c + i, k);
            }
            let f = d * 2.0 / vtv;
            for (i, &x) in v.iter().enumerate() {
                let cur = w.get(c + i, k);
                w.set(c + i, k, cur - f * x);
            }
        }
        w.set(c, c, alpha);
        for i in c + 1..rows {
            w.set(i, c, DoubleDouble::ZERO);
        }
    }
    w
}

/// `sigma_min(a)`; zero when `a` has more columns than rows or a zero pivot.
pub fn min_singular_value_dd(a: &DdRect) -> Result<f64> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Err(Error::Dimension("matrix without columns".into()));
    }
    if rows < cols {
        return Ok(0.0);
    }
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite matrix entry".into()));
    }
    let r = householder_r(a);
    if (0..cols).any(|i| r.get(i, i).hi() == 0.0) {
        return Ok(0.0);
    }
    // X = R^{-1}, upper triangular, column by column
    let mut x = DdRect::from_fn(cols, cols, |_, _| DoubleDouble::ZERO);
    for c in 0..cols {
        for i in (0..=c).rev() {
            let mut s = if i == c { DoubleDouble::ONE } else { DoubleDouble::ZERO };
            for k in i + 1..=c {
                s -= r.get(i, k) * x.get(k, c);
            }
            x.set(i, c, s / r.get(i, i));
        }
    }
    let sv = singular_values(&x.to_f64(), false)?;
    Ok(1.0 / sv[0])
}
