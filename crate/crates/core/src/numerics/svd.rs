//! One-sided Jacobi SVD for real and complex dense matrices.
//!
//! A tall matrix is first reduced by Householder QR with column pivoting,
//! `A P = Q R`, and the Hestenes iteration is run on `R^H`. The pivoted
//! factor has rows of decreasing norm, so the iteration converges in a few
//! sweeps, and the small singular values keep high relative accuracy for
//! column-scaled ill-conditioning. Wide matrices are handled by transposition.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dd::CompensatedSum;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Scalar types the SVD accepts: `f64` and `Complex64`.
pub trait Entry:
    nalgebra::Scalar
    + Copy
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn from_f64(x: f64) -> Self;
    fn to_complex(self) -> Complex64;
    fn conj(self) -> Self;
    fn abs2(self) -> f64;
    fn scale(self, r: f64) -> Self;
    /// `z / |z|`, or one for `z = 0`.
    fn unit_phase(self) -> Self;
    fn is_finite_entry(self) -> bool;
    /// `sum conj(x_i) y_i` with double-double accumulation.
    fn dot_compensated(x: &[Self], y: &[Self]) -> Self;

    #[inline]
    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    #[inline]
    fn abs(self) -> f64 {
        self.abs2().sqrt()
    }
}

impl Entry for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn abs2(self) -> f64 {
        self * self
    }
    #[inline]
    fn scale(self, r: f64) -> Self {
        self * r
    }
    #[inline]
    fn unit_phase(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
    #[inline]
    fn is_finite_entry(self) -> bool {
        self.is_finite()
    }
    fn dot_compensated(x: &[Self], y: &[Self]) -> Self {
        super::dd::dot2(x, y)
    }
}

impl Entry for Complex64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        self
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn scale(self, r: f64) -> Self {
        self * r
    }
    #[inline]
    fn unit_phase(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self / r
        }
    }
    #[inline]
    fn is_finite_entry(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn dot_compensated(x: &[Self], y: &[Self]) -> Self {
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for (a, b) in x.iter().zip(y) {
            // conj(a) * b
            re.add_product(a.re, b.re);
            re.add_product(a.im, b.im);
            im.add_product(a.re, b.im);
            im.add_product(-a.im, b.re);
        }
        Complex64::new(re.value(), im.value())
    }
}

#[inline]
fn dot<T: Entry>(x: &[T], y: &[T]) -> T {
    let mut s = T::zero();
    for (&a, &b) in x.iter().zip(y) {
        s += a.conj() * b;
    }
    s
}

#[inline]
fn norm2<T: Entry>(x: &[T], compensated: bool) -> f64 {
    if compensated {
        let mut s = CompensatedSum::new();
        for &v in x {
            s.add(v.abs2());
        }
        s.value()
    } else {
        x.iter().map(|v| v.abs2()).sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SvdOptions {
    /// Accumulate inner products in double-double inside the Jacobi sweeps.
    pub compensated: bool,
    /// Skip forming the left singular vectors.
    pub values_and_right_only: bool,
}

/// Thin SVD `A = U diag(sigma) V^H` with `r = min(rows, cols)` singular triplets.
///
/// Left singular vectors belonging to a zero singular value are returned as zero
/// columns.
#[derive(Debug, Clone)]
pub struct SvdResult<T: Entry> {
    pub u: DMatrix<T>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<T>,
    pub sweeps: usize,
}

impl<T: Entry> SvdResult<T> {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, cutoff_rel: f64) -> usize {
        let smax = self.sigma_max();
        self.singular_values
            .iter()
            .take_while(|&&s| s > cutoff_rel * smax && s > 0.0)
            .count()
    }
}

pub fn svd<T: Entry>(a: &DMatrix<T>) -> Result<SvdResult<T>> {
    svd_with(a, SvdOptions::default())
}

pub fn svd_with<T: Entry>(a: &DMatrix<T>, opts: SvdOptions) -> Result<SvdResult<T>> {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension("SVD of an empty matrix".into()));
    }
    for c in 0..cols {
        for r in 0..rows {
            if !a[(r, c)].is_finite_entry() {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }
    if rows >= cols {
        svd_tall(a, opts)
    } else {
        let at = adjoint(a);
        let t = svd_tall(
            &at,
            SvdOptions {
                compensated: opts.compensated,
                values_and_right_only: false,
            },
        )?;
        // A = (A^H)^H = V S U^H
        Ok(SvdResult {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
            sweeps: t.sweeps,
        })
    }
}

/// Singular values only, in decreasing order.
pub fn singular_values<T: Entry>(a: &DMatrix<T>, compensated: bool) -> Result<Vec<f64>> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return singular_values(&adjoint(a), compensated);
    }
    svd_with(
        a,
        SvdOptions {
            compensated,
            values_and_right_only: true,
        },
    )
    .map(|r| r.singular_values)
}

/// Conjugate transpose.
pub fn adjoint<T: Entry>(a: &DMatrix<T>) -> DMatrix<T> {
    DMatrix::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

struct Reflector<T> {
    v: Vec<T>,
    beta: f64,
}

fn svd_tall<T: Entry>(a: &DMatrix<T>, opts: SvdOptions) -> Result<SvdResult<T>> {
    let (rows, n) = a.shape();
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| a.column(j).iter().copied().collect()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors: Vec<Reflector<T>> = Vec::with_capacity(n);

    // Householder QR with column pivoting; the active part of column j is cols[j][k..]
    for k in 0..n {
        let (best, _) = (k..n)
            .map(|j| (j, norm2(&cols[j][k..], false)))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        cols.swap(k, best);
        perm.swap(k, best);

        let x = &cols[k][k..];
        let xnorm = norm2(x, false).sqrt();
        if xnorm == 0.0 {
            reflectors.push(Reflector {
                v: vec![T::zero(); rows - k],
                beta: 0.0,
            });
            continue;
        }
        let alpha = -(x[0].unit_phase().scale(xnorm));
        let mut v: Vec<T> = x.to_vec();
        v[0] = v[0] - alpha;
        let vnorm2 = norm2(&v, false);
        let beta = if vnorm2 > 0.0 { 2.0 / vnorm2 } else { 0.0 };
        cols[k][k] = alpha;
        for e in cols[k][k + 1..].iter_mut() {
            *e = T::zero();
        }
        for col in cols.iter_mut().skip(k + 1) {
            let y = &mut col[k..];
            let w = dot(&v, y).scale(beta);
            for (yi, &vi) in y.iter_mut().zip(&v) {
                *yi = *yi - vi * w;
            }
        }
        reflectors.push(Reflector { v, beta });
    }

    // X = R^H, stored by columns: column i of X is conj of row i of R
    let mut x: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if j >= i { cols[j][i].conj() } else { T::zero() }).collect())
        .collect();
    let want_u = !opts.values_and_right_only;
    let mut w: Vec<Vec<T>> = if want_u {
        (0..n)
            .map(|i| {
                let mut e = vec![T::zero(); n];
                e[i] = T::from_f64(1.0);
                e
            })
            .collect()
    } else {
        Vec::new()
    };

    let tol = f64::EPSILON * (n as f64).sqrt().max(1.0);
    let mut sweeps = 0;
    let mut converged = n < 2;
    let mut norms: Vec<f64> = x.iter().map(|c| norm2(c, opts.compensated)).collect();
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = if opts.compensated {
                    T::dot_compensated(&x[p], &x[q])
                } else {
                    dot(&x[p], &x[q])
                };
                let g = gamma.abs();
                if !(g > tol * (alpha * beta).sqrt()) {
                    continue;
                }
                rotated = true;
                // phase on column q makes the inner product real and positive
                let phase = gamma.unit_phase().conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (xp, xq) = pair_mut(&mut x, p, q);
                rotate(xp, xq, phase, c, s);
                if want_u {
                    let (wp, wq) = pair_mut(&mut w, p, q);
                    rotate(wp, wq, phase, c, s);
                }
                norms[p] = (alpha - t * g).max(0.0);
                norms[q] = beta + t * g;
            }
        }
        // refresh norms to stop drift of the updated values
        for (nrm, c) in norms.iter_mut().zip(&x) {
            *nrm = norm2(c, opts.compensated);
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::Consistency(format!(
            "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = norms.iter().map(|v| v.sqrt()).collect();
    order.sort_by(|&i, &j| sig[j].partial_cmp(&sig[i]).unwrap());

    // V = P * Utilde, Utilde_i = X_i / sigma_i
    let mut v = DMatrix::<T>::from_element(n, n, T::zero());
    let mut sv = Vec::with_capacity(n);
    for (out, &i) in order.iter().enumerate() {
        let s = sig[i];
        sv.push(s);
        if s > 0.0 {
            for r in 0..n {
                v[(perm[r], out)] = x[i][r].scale(1.0 / s);
            }
        }
    }

    // U = Q * W, Q applied as the product of reflectors
    let u = if want_u {
        let mut u = DMatrix::<T>::from_element(rows, n, T::zero());
        for (out, &i) in order.iter().enumerate() {
            let mut col = vec![T::zero(); rows];
            col[..n].copy_from_slice(&w[i]);
            for (k, h) in reflectors.iter().enumerate().rev() {
                if h.beta == 0.0 {
                    continue;
                }
                let y = &mut col[k..];
                let s = dot(&h.v, y).scale(h.beta);
                for (yi, &vi) in y.iter_mut().zip(&h.v) {
                    *yi = *yi - vi * s;
                }
            }
            if sig[i] > 0.0 {
                for r in 0..rows {
                    u[(r, out)] = col[r];
                }
            }
        }
        u
    } else {
        DMatrix::<T>::from_element(0, 0, T::zero())
    };

    Ok(SvdResult {
        u,
        singular_values: sv,
        v,
        sweeps,
    })
}

#[inline]
fn pair_mut<T>(v: &mut [Vec<T>], p: usize, q: usize) -> (&mut Vec<T>, &mut Vec<T>) {
    debug_assert!(p < q);
    let (a, b) = v.split_at_mut(q);
    (&mut a[p], &mut b[0])
}

#[inline]
fn rotate<T: Entry>(xp: &mut [T], xq: &mut [T], phase: T, c: f64, s: f64) {
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * phase;
        let ap = *a;
        *a = ap.scale(c) - bq.scale(s);
        *b = ap.scale(s) + bq.scale(c);
    }
}
