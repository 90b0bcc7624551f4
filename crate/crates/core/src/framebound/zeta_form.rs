//! Exact-series evaluation of `B(n, m, p)` and its supremum over degree-`n`
//! polynomials with vanishing mean.
//!
//! `sum_{j != 0} j^{-s} = (1 + (-1)^s) zeta(s)`, so only entries with `k + l`
//! even survive in the numerator form.

use crate::error::{Error, Result};
use crate::numerics::eig::gen_sym_eig_max_dd;
use crate::numerics::zeta::zeta_partial_dd;
use crate::numerics::{riemann_zeta_dd, DdMatrix, DoubleDouble};
use crate::polyspace::TPolyCoeffs;

/// Largest `t`-degree handled by the zeta forms.
pub const MAX_ZETA_DEGREE: usize = 9;

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_ZETA_DEGREE {
        return Err(Error::DegreeCap {
            degree: n,
            cap: MAX_ZETA_DEGREE,
        });
    }
    Ok(())
}

/// `B(n, m, p)` with the numerator `sum_{k,l} b_k conj(b_l) (1 + (-1)^{k+l}) zeta(k+l)`
/// and the denominator summed directly over `1 <= |j| <= m`.
pub fn zeta_form_bound(p: &TPolyCoeffs, m: usize) -> Result<f64> {
    let n = p.degree();
    check_degree(n)?;
    let mut num = DoubleDouble::ZERO;
    for k in 1..=n {
        for l in 1..=n {
            if (k + l) % 2 == 1 {
                continue;
            }
            let (bk, bl) = (p.b[k - 1], p.b[l - 1]);
            // Re(b_k conj(b_l))
            let re = DoubleDouble::mul_f64s(bk.re, bl.re) + DoubleDouble::mul_f64s(bk.im, bl.im);
            num += re * riemann_zeta_dd((k + l) as u32)? * 2.0;
        }
    }
    let mut den = DoubleDouble::ZERO;
    for j in 1..=m {
        let t = 1.0 / j as f64;
        for v in [p.eval_t(t), p.eval_t(-t)] {
            den += DoubleDouble::mul_f64s(v.re, v.re) + DoubleDouble::mul_f64s(v.im, v.im);
        }
    }
    if den.hi() == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((num / den).to_f64().sqrt())
}

/// `sup B(n, m, p)` over `p~` of degree `n` with `p~(0) = 0`: the square root
/// of the largest eigenvalue of the pencil `(Z, Z_m)`.
///
/// When `n > 2m` some nonzero `p~` vanishes at every `1/j`, `|j| <= m`, and the
/// supremum is infinite.
pub fn sup_zeta_bound(n: usize, m: usize) -> Result<f64> {
    check_degree(n)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the zeta pencil needs degree at least 1".into(),
        ));
    }
    if n > 2 * m {
        return Ok(f64::INFINITY);
    }
    let mut z = DdMatrix::zeros(n);
    let mut zm = DdMatrix::zeros(n);
    for k in 1..=n {
        for l in 1..=n {
            let s = (k + l) as u32;
            if s % 2 == 1 {
                continue;
            }
            z.set(k - 1, l - 1, riemann_zeta_dd(s)? * 2.0);
            zm.set(k - 1, l - 1, zeta_partial_dd(s, m) * 2.0);
        }
    }
    Ok(gen_sym_eig_max_dd(&z, &zm)?.sqrt())
}
