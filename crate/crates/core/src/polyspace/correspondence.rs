use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::legendre::LegendrePoly;
use crate::error::{Error, Result};
use crate::numerics::{DoubleDouble, Entry};

/// Largest degree accepted by [`endpoint_correspondence`].
pub const MAX_CORRESPONDENCE_DEGREE: usize = 60;

/// The polynomial `p~(t) = sum_{k=1}^n b_k t^k` with `p^_j = (-1)^j p~(1/j)` for
/// `j != 0`, together with `p^_0`.
///
/// `b_lo` holds the low-order parts of the coefficients when they were computed
/// in double-double; evaluation at `t = 1/j` cancels heavily for small `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TPolyCoeffs {
    /// `b[k-1] = b_k`.
    pub b: Vec<Complex64>,
    #[serde(default)]
    pub b_lo: Vec<Complex64>,
    pub hat_p0: Complex64,
}

impl TPolyCoeffs {
    pub fn new(b: Vec<Complex64>, hat_p0: Complex64) -> Self {
        TPolyCoeffs {
            b_lo: vec![Complex64::new(0.0, 0.0); b.len()],
            b,
            hat_p0,
        }
    }

    /// Real monomial coefficients `b_1..b_n`, with `p^_0 = 0`.
    pub fn from_real(b: &[f64]) -> Self {
        TPolyCoeffs::new(
            b.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            Complex64::new(0.0, 0.0),
        )
    }

    pub fn degree(&self) -> usize {
        self.b.len()
    }

    fn coeff_dd(&self, k: usize) -> (DoubleDouble, DoubleDouble) {
        let lo = self.b_lo.get(k).copied().unwrap_or_default();
        (
            DoubleDouble::from_parts(self.b[k].re, lo.re),
            DoubleDouble::from_parts(self.b[k].im, lo.im),
        )
    }

    fn eval_dd(&self, t: DoubleDouble) -> Complex64 {
        let mut re = DoubleDouble::ZERO;
        let mut im = DoubleDouble::ZERO;
        for k in (0..self.b.len()).rev() {
            let (br, bi) = self.coeff_dd(k);
            re = re * t + br;
            im = im * t + bi;
        }
        Complex64::new((re * t).to_f64(), (im * t).to_f64())
    }

    /// `p~(t)`, Horner form in double-double.
    pub fn eval_t(&self, t: f64) -> Complex64 {
        self.eval_dd(DoubleDouble::from_f64(t))
    }

    /// `p^_j`.
    pub fn hat_p(&self, j: i64) -> Complex64 {
        if j == 0 {
            return self.hat_p0;
        }
        let v = self.eval_dd(DoubleDouble::from_f64(j as f64).recip());
        if j % 2 == 0 {
            v
        } else {
            -v
        }
    }
}

/// `P_k^{(r)}(1)` in double-double.
fn derivative_at_one_dd(k: usize, r: usize) -> DoubleDouble {
    if r > k {
        return DoubleDouble::ZERO;
    }
    let mut v = DoubleDouble::ONE;
    for i in 0..r {
        v *= DoubleDouble::mul_f64s((k - i) as f64, (k + i + 1) as f64);
        v = v / (2.0 * (i + 1) as f64);
    }
    v
}

/// `b_k = -(p^{(k-1)}(1) - p^{(k-1)}(-1)) / (sqrt 2 (i pi)^k)` for `k = 1..=deg p`,
/// accumulated in double-double.
pub fn endpoint_correspondence<T: Entry>(p: &LegendrePoly<T>) -> Result<TPolyCoeffs> {
    let n = p.degree();
    if n > MAX_CORRESPONDENCE_DEGREE {
        return Err(Error::DegreeCap {
            degree: n,
            cap: MAX_CORRESPONDENCE_DEGREE,
        });
    }
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(|c| c.to_complex()).collect();
    let scales: Vec<DoubleDouble> = (0..=n)
        .map(|k| (DoubleDouble::from_f64((2 * k + 1) as f64) / 2.0).sqrt())
        .collect();
    let mut b = Vec::with_capacity(n);
    let mut b_lo = Vec::with_capacity(n);
    let mut pi_pow = DoubleDouble::from_f64(2.0).sqrt();
    for k in 1..=n {
        pi_pow *= DoubleDouble::PI;
        let r = k - 1;
        // P_l^{(r)}(1) - P_l^{(r)}(-1) is 2 P_l^{(r)}(1) when l + r is odd, else 0
        let mut dre = DoubleDouble::ZERO;
        let mut dim = DoubleDouble::ZERO;
        for l in (r..=n).filter(|l| (l + r) % 2 == 1) {
            let w = scales[l] * derivative_at_one_dd(l, r) * 2.0;
            dre += w * coeffs[l].re;
            dim += w * coeffs[l].im;
        }
        // -delta (-i)^k / (sqrt 2 pi^k)
        let (re, im) = match k % 4 {
            0 => (-dre, -dim),
            1 => (-dim, dre),
            2 => (dre, dim),
            _ => (dim, -dre),
        };
        let (re, im) = (re / pi_pow, im / pi_pow);
        b.push(Complex64::new(re.hi(), im.hi()));
        b_lo.push(Complex64::new(re.lo(), im.lo()));
    }
    Ok(TPolyCoeffs {
        b,
        b_lo,
        hat_p0: coeffs[0],
    })
}
