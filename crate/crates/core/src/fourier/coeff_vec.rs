use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fourier coefficients `c_j`, `|j| <= m`, stored at offset `j + m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffVec {
    m: usize,
    values: Vec<Complex64>,
}

impl CoeffVec {
    pub fn new(m: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != 2 * m + 1 {
            return Err(Error::Dimension(format!(
                "half-width {m} needs {} coefficients, got {}",
                2 * m + 1,
                values.len()
            )));
        }
        Ok(CoeffVec { m, values })
    }

    pub fn zeros(m: usize) -> Self {
        CoeffVec {
            m,
            values: vec![Complex64::new(0.0, 0.0); 2 * m + 1],
        }
    }

    /// Builds the vector from `j -> c_j`.
    pub fn from_fn<F: FnMut(i64) -> Complex64>(m: usize, mut f: F) -> Self {
        let mi = m as i64;
        CoeffVec {
            m,
            values: (-mi..=mi).map(&mut f).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, j: i64) -> Complex64 {
        self.values[self.offset(j)]
    }

    pub fn set(&mut self, j: i64, v: Complex64) {
        let k = self.offset(j);
        self.values[k] = v;
    }

    fn offset(&self, j: i64) -> usize {
        let k = j + self.m as i64;
        assert!(
            k >= 0 && (k as usize) < self.values.len(),
            "index {j} outside |j| <= {}",
            self.m
        );
        k as usize
    }

    /// Storage in order `j = -m..=m`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Indices `-m..=m` paired with values.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m = self.m as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (k as i64 - m, v))
    }

    /// The coefficients with `|j| <= m2`, for `m2 <= m`.
    pub fn truncate(&self, m2: usize) -> Result<CoeffVec> {
        if m2 > self.m {
            return Err(Error::InvalidArgument(format!(
                "cannot truncate half-width {} to {m2}",
                self.m
            )));
        }
        let off = self.m - m2;
        Ok(CoeffVec {
            m: m2,
            values: self.values[off..off + 2 * m2 + 1].to_vec(),
        })
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &CoeffVec, b: Complex64) -> Result<CoeffVec> {
        if other.m != self.m {
            return Err(Error::Dimension(format!(
                "half-widths {} and {}",
                self.m, other.m
            )));
        }
        Ok(CoeffVec {
            m: self.m,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// `sqrt(sum |c_j|^2)`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(1/sqrt 2) sum_{|j| <= m} c_j e^{i j pi x}`.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, c) in self.iter() {
            let (sn, cs) = (std::f64::consts::PI * (j as f64 * x)).sin_cos();
            s += c * Complex64::new(cs, sn);
        }
        s * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Largest `|c_{-j} - conj(c_j)|` relative to the largest coefficient.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let scale = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let m = self.m as i64;
        (0..=m)
            .map(|j| (self.get(-j) - self.get(j).conj()).norm())
            .fold(0.0, f64::max)
            / scale
    }

    /// Writes `j,re,im` rows with 17 significant digits, after an optional comment line.
    pub fn write_csv<W: Write>(&self, mut w: W, comment: Option<&str>) -> Result<()> {
        if let Some(c) = comment {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "j,re,im")?;
        for (j, v) in self.iter() {
            writeln!(w, "{j},{:.16e},{:.16e}", v.re, v.im)?;
        }
        Ok(())
    }

    /// Reads the `j,re,im` format. Rows may come in any order but must cover
    /// `-m..=m` exactly once; `#` lines are skipped.
    pub fn read_csv<R: Read>(r: R) -> Result<CoeffVec> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(r);
        let headers = rdr.headers()?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names != ["j", "re", "im"] {
            return Err(Error::Parse {
                line: rdr.position().line() as usize,
                msg: format!("expected header j,re,im, found {}", names.join(",")),
            });
        }
        let mut rows: Vec<(i64, Complex64, usize)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map(|p| p.line() as usize).unwrap_or(0),
                msg: e.to_string(),
            })?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            if rec.len() != 3 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 3 fields, found {}", rec.len()),
                });
            }
            let j: i64 = rec[0].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad index {:?}", &rec[0]),
            })?;
            let re: f64 = parse_float(&rec[1], line)?;
            let im: f64 = parse_float(&rec[2], line)?;
            rows.push((j, Complex64::new(re, im), line));
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 1,
                msg: "no coefficient rows".into(),
            });
        }
        let m = rows.iter().map(|r| r.0.unsigned_abs()).max().unwrap() as usize;
        let mut out = CoeffVec::zeros(m);
        let mut seen = vec![false; 2 * m + 1];
        for (j, v, line) in rows {
            let k = (j + m as i64) as usize;
            if seen[k] {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate index {j}"),
                });
            }
            seen[k] = true;
            out.values[k] = v;
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("missing index {}", k as i64 - m as i64),
            });
        }
        Ok(out)
    }
}

fn parse_float(s: &str, line: usize) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            line,
            msg: format!("bad number {s:?}"),
        }),
    }
}
