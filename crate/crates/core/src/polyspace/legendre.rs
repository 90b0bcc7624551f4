use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Entry;

/// Values `Pbar_0(x), ..., Pbar_n(x)` of the orthonormal Legendre basis
/// `Pbar_k = sqrt((2k+1)/2) P_k`.
pub fn orthonormal_legendre_values(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[0] = 1.0;
    if n >= 1 {
        p[1] = x;
    }
    for k in 1..n {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0);
    }
    for (k, v) in p.iter_mut().enumerate() {
        *v *= ((2 * k + 1) as f64 / 2.0).sqrt();
    }
    p
}

/// `P_k^{(r)}(1) = prod_{i<r} (k-i)(k+i+1) / (2(i+1))`, zero for `r > k`.
pub fn legendre_derivative_at_one(k: usize, r: usize) -> f64 {
    if r > k {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| {
        acc * ((k - i) as f64) * ((k + i + 1) as f64) / (2.0 * (i + 1) as f64)
    })
}

/// `P_k^{(r)}(-1) = (-1)^{k+r} P_k^{(r)}(1)`.
pub fn legendre_derivative_at_minus_one(k: usize, r: usize) -> f64 {
    let v = legendre_derivative_at_one(k, r);
    if (k + r) % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Polynomial `sum_k c_k Pbar_k` in the orthonormal Legendre basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendrePoly<T: Entry = f64> {
    coeffs: Vec<T>,
}

impl<T: Entry> LegendrePoly<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a Legendre expansion needs at least one coefficient".into(),
            ));
        }
        Ok(LegendrePoly { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        LegendrePoly {
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    /// Nominal degree, the number of coefficients minus one.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `||p||_2`, equal to the Euclidean norm of the coefficients.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs2()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, x: f64) -> T {
        let basis = orthonormal_legendre_values(self.degree(), x);
        let mut s = T::zero();
        for (&c, &b) in self.coeffs.iter().zip(&basis) {
            s += c.scale(b);
        }
        s
    }

    /// `p^{(r)}(1)` and `p^{(r)}(-1)` from the closed-form endpoint values.
    pub fn endpoint_derivatives(&self, r: usize) -> (T, T) {
        let mut plus = T::zero();
        let mut minus = T::zero();
        for (k, &c) in self.coeffs.iter().enumerate() {
            let scale = ((2 * k + 1) as f64 / 2.0).sqrt();
            plus += c.scale(scale * legendre_derivative_at_one(k, r));
            minus += c.scale(scale * legendre_derivative_at_minus_one(k, r));
        }
        (plus, minus)
    }
}

impl LegendrePoly<f64> {
    pub fn to_complex(&self) -> LegendrePoly<Complex64> {
        LegendrePoly {
            coeffs: self.coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn eval_complex(&self, x: f64) -> Complex64 {
        Complex64::new(self.eval(x), 0.0)
    }

    /// Writes `k,c_k` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,c_k")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(w, "{k},{c:.16e}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let rows = read_rows(r, &["k", "c_k"])?;
        let coeffs = rows.into_iter().map(|v| v[0]).collect();
        LegendrePoly::new(coeffs)
    }
}

impl LegendrePoly<Complex64> {
    pub fn eval_complex(&self, x: f64) -> Complex64 {
        self.eval(x)
    }

    /// Writes `k,re,im` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,re,im")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(w, "{k},{:.16e},{:.16e}", c.re, c.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let rows = read_rows(r, &["k", "re", "im"])?;
        let coeffs = rows
            .into_iter()
            .map(|v| Complex64::new(v[0], v[1]))
            .collect();
        LegendrePoly::new(coeffs)
    }

    /// Largest imaginary part relative to the coefficient norm.
    pub fn imaginary_defect(&self) -> f64 {
        let n = self.norm();
        if n == 0.0 {
            return 0.0;
        }
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max) / n
    }

    pub fn real_part(&self) -> LegendrePoly<f64> {
        LegendrePoly {
            coeffs: self.coeffs.iter().map(|c| c.re).collect(),
        }
    }
}

/// Rows `k, v...` with `k = 0, 1, ...` in order; returns the values after `k`.
fn read_rows<R: Read>(r: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(r);
    let got: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if got != header {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {}, found {}", header.join(","), got.join(",")),
        });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let k: usize = rec[0].parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad index {:?}", &rec[0]),
        })?;
        if k != out.len() {
            return Err(Error::Parse {
                line,
                msg: format!("expected index {}, found {k}", out.len()),
            });
        }
        let vals = (1..header.len())
            .map(|i| {
                rec.get(i)
                    .and_then(|s| s.parse::<f64>().ok())
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: format!("bad value in column {}", header[i]),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push(vals);
    }
    Ok(out)
}
