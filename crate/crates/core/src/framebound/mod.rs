//! The stability constant `B_{n,m}`, its closed-form lower bound, the witness
//! ratio, and the zeta-series oracles.

mod witness_ratio;
mod zeta_form;

pub use witness_ratio::{witness_lower_bound, witness_ratio, witness_ratio_detailed, WitnessRatio, WITNESS_TRUNCATION};
pub use zeta_form::{sup_zeta_bound, zeta_form_bound, MAX_ZETA_DEGREE};

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{min_singular_value_dd, singular_values};
use crate::polyspace::{legendre_fourier_matrix, parity_blocks, parity_blocks_dd};

/// Largest predicted `B` accepted in double precision.
pub const DOUBLE_CAP: f64 = 1e8;
/// Largest predicted `B` accepted in double-double precision.
pub const DD_CAP: f64 = 1e14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum PrecisionMode {
    #[default]
    #[serde(rename = "double")]
    Double,
    #[serde(rename = "dd")]
    DoubleDouble,
}

impl PrecisionMode {
    pub fn cap(self) -> f64 {
        match self {
            PrecisionMode::Double => DOUBLE_CAP,
            PrecisionMode::DoubleDouble => DD_CAP,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PrecisionMode::Double => "double",
            PrecisionMode::DoubleDouble => "dd",
        }
    }
}

impl fmt::Display for PrecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PrecisionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(PrecisionMode::Double),
            "dd" | "double-double" => Ok(PrecisionMode::DoubleDouble),
            _ => Err(Error::InvalidArgument(format!(
                "unknown precision mode {s:?} (expected double or dd)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BnmReport {
    pub n: usize,
    pub m: usize,
    pub b_value: f64,
    pub b_star: f64,
    pub sigma_min: f64,
    pub precision_mode: PrecisionMode,
}

impl BnmReport {
    pub const CSV_HEADER: &'static str = "n,m,b_value,b_star,sigma_min,precision_mode";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{}",
            self.n, self.m, self.b_value, self.b_star, self.sigma_min, self.precision_mode
        )
    }

    pub fn write_csv<W: Write>(rows: &[BnmReport], mut w: W, comment: Option<&str>) -> Result<()> {
        if let Some(c) = comment {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in rows {
            writeln!(w, "{}", r.csv_row())?;
        }
        Ok(())
    }
}

/// `B_{n,m} = 1 / sigma_min` of the Legendre–Fourier matrix.
///
/// For `n > 2m` the matrix has a null vector and `B_{n,m}` is infinite.
pub fn bnm(n: usize, m: usize, mode: PrecisionMode) -> Result<BnmReport> {
    let b_star = b_star(n, m);
    let report = |sigma_min: f64| BnmReport {
        n,
        m,
        b_value: if sigma_min > 0.0 { 1.0 / sigma_min } else { f64::INFINITY },
        b_star,
        sigma_min,
        precision_mode: mode,
    };
    if n > 2 * m {
        return Ok(report(0.0));
    }
    if b_star > mode.cap() {
        return Err(Error::PrecisionRegime {
            n,
            m,
            predicted: b_star,
            cap: mode.cap(),
            mode: mode.as_str(),
        });
    }
    legendre_fourier_matrix(n, m)?;
    let sigma = match mode {
        PrecisionMode::Double => {
            let b = parity_blocks(n, m)?;
            let mut s = block_sigma_min(&b.even)?;
            if b.odd.ncols() > 0 {
                s = s.min(block_sigma_min(&b.odd)?);
            }
            s
        }
        PrecisionMode::DoubleDouble => {
            let (even, odd) = parity_blocks_dd(n, m)?;
            let mut s = min_singular_value_dd(&even)?;
            if odd.shape().1 > 0 {
                s = s.min(min_singular_value_dd(&odd)?);
            }
            s
        }
    };
    Ok(report(sigma))
}

fn block_sigma_min(a: &nalgebra::DMatrix<f64>) -> Result<f64> {
    if a.nrows() < a.ncols() {
        return Ok(0.0);
    }
    Ok(*singular_values(a, false)?.last().unwrap())
}

/// `ln(B*_{n,m}^2 - 1 - n/(8m))`, i.e. `ln(n/(16m)) + (n^2/m) ln(9/4)`.
fn log_growth_term(n: f64, m: f64, exponent: f64) -> f64 {
    (n / (16.0 * m)).ln() + exponent * (9.0f64 / 4.0).ln()
}

fn bound_from_exponent(n: usize, m: usize, exponent: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if m == 0 {
        return f64::INFINITY;
    }
    let (nf, mf) = (n as f64, m as f64);
    let base = 1.0 + nf / (8.0 * mf);
    let lg = log_growth_term(nf, mf, exponent);
    if lg < 700.0 {
        (base + lg.exp()).sqrt()
    } else {
        // base is negligible against e^lg
        (0.5 * lg).exp()
    }
}

/// `B*_{n,m} = sqrt(1 + n/(8m) + n/(16m) (9/4)^{n^2/m})`; infinite for `m = 0 < n`.
pub fn b_star(n: usize, m: usize) -> f64 {
    bound_from_exponent(n, m, (n * n) as f64 / m as f64)
}

/// `ln B*_{n,m}`, finite even where `B*` overflows.
pub fn log_b_star(n: usize, m: usize) -> f64 {
    log_bound_from_exponent(n, m, (n * n) as f64 / m as f64)
}

/// The bound with the exponent `n^2/(8m)` that the argument through the
/// witness polynomial actually delivers.
pub fn proof_exponent_bound(n: usize, m: usize) -> f64 {
    bound_from_exponent(n, m, (n * n) as f64 / (8.0 * m as f64))
}

pub fn log_proof_exponent_bound(n: usize, m: usize) -> f64 {
    log_bound_from_exponent(n, m, (n * n) as f64 / (8.0 * m as f64))
}

fn log_bound_from_exponent(n: usize, m: usize, exponent: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if m == 0 {
        return f64::INFINITY;
    }
    let (nf, mf) = (n as f64, m as f64);
    let base = 1.0 + nf / (8.0 * mf);
    let lg = log_growth_term(nf, mf, exponent);
    // ln sqrt(base + e^lg)
    let hi = lg.max(base.ln());
    0.5 * (hi + ((base.ln() - hi).exp() + (lg - hi).exp()).ln())
}
