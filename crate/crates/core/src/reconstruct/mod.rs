//! Reconstruction maps from the coefficients `|j| <= m`: the inverse
//! polynomial reconstruction method, polynomial least squares and Fourier
//! extensions, all solved through [`TruncatedSvd`].

mod maps;
mod solver;

pub use maps::{
    fe_matrix, fourier_extension, fourier_extension_with_cutoff, iprm, poly_ls, ExtensionFn,
};
pub use solver::{ls_solve, LsSolveInfo, TruncatedSvd, DEFAULT_CUTOFF};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{norm_l2, CoeffVec, TestFunction, DEFAULT_NORM_NODES};
use crate::polyspace::LegendrePoly;

/// Anything that can be sampled on `[-1, 1]`.
pub trait Evaluable {
    fn value(&self, x: f64) -> Complex64;
}

impl Evaluable for TestFunction {
    fn value(&self, x: f64) -> Complex64 {
        self.eval_complex(x)
    }
}

impl Evaluable for LegendrePoly<f64> {
    fn value(&self, x: f64) -> Complex64 {
        self.eval_complex(x)
    }
}

impl Evaluable for LegendrePoly<Complex64> {
    fn value(&self, x: f64) -> Complex64 {
        self.eval(x)
    }
}

impl Evaluable for ExtensionFn {
    fn value(&self, x: f64) -> Complex64 {
        self.eval(x)
    }
}

/// The truncated Fourier series.
impl Evaluable for CoeffVec {
    fn value(&self, x: f64) -> Complex64 {
        self.evaluate(x)
    }
}

impl<F: Fn(f64) -> Complex64> Evaluable for F {
    fn value(&self, x: f64) -> Complex64 {
        self(x)
    }
}

/// `||f - approx||_2` by the 1000-point Gauss–Legendre rule.
pub fn l2_error<A: Evaluable + ?Sized>(f: &TestFunction, approx: &A) -> Result<f64> {
    norm_l2(|x| f.eval_complex(x) - approx.value(x), DEFAULT_NORM_NODES)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Iprm,
    PolyLs,
    FourierExtension,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Iprm => "iprm",
            Method::PolyLs => "poly_ls",
            Method::FourierExtension => "fourier_extension",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iprm" => Ok(Method::Iprm),
            "poly_ls" | "pls" => Ok(Method::PolyLs),
            "fourier_extension" | "fe" => Ok(Method::FourierExtension),
            _ => Err(Error::InvalidArgument(format!(
                "unknown method {s:?}; expected iprm, pls or fe"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Orthonormal Legendre polynomials.
    Legendre,
    /// `e^{i k pi x / T}`, `|k| <= n`.
    ExtensionFourier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionParams {
    pub method: Method,
    pub m: usize,
    /// Half-degree for the polynomial methods, degree for extensions.
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub rank_used: usize,
    pub svd_cutoff: f64,
    pub residual_norm: f64,
}

/// A reconstruction in serializable form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub basis: Basis,
    pub parameters: ReconstructionParams,
    /// Legendre coefficients `k = 0..=2n`, or extension coefficients `k = -n..=n`.
    pub coefficients: Vec<Complex64>,
}

impl Reconstruction {
    /// Runs `method` on `c`. `n` is ignored by the inverse method; `t` is
    /// required by extensions only.
    pub fn compute(method: Method, c: &CoeffVec, n: usize, t: Option<f64>) -> Result<Self> {
        let m = c.m();
        let (basis, n, t, coefficients, info) = match method {
            Method::Iprm => {
                let (p, info) = iprm(c)?;
                (Basis::Legendre, m, None, p.coeffs().to_vec(), info)
            }
            Method::PolyLs => {
                let (p, info) = poly_ls(c, n)?;
                (Basis::Legendre, n, None, p.coeffs().to_vec(), info)
            }
            Method::FourierExtension => {
                let t = t.ok_or_else(|| {
                    Error::InvalidArgument("Fourier extension needs T".into())
                })?;
                let (g, info) = fourier_extension(c, n, t)?;
                (Basis::ExtensionFourier, n, Some(t), g.a, info)
            }
        };
        Ok(Reconstruction {
            basis,
            parameters: ReconstructionParams {
                method,
                m,
                n,
                t,
                rank_used: info.rank_used,
                svd_cutoff: info.svd_cutoff,
                residual_norm: info.residual_norm,
            },
            coefficients,
        })
    }

    /// Checks that the coefficient count matches the basis.
    pub fn validate(&self) -> Result<()> {
        let n = self.parameters.n;
        let want = match self.basis {
            Basis::Legendre => 2 * n + 1,
            Basis::ExtensionFourier => {
                let t = self.parameters.t.unwrap_or(f64::NAN);
                ExtensionFn::new(t, n, self.coefficients.clone())?;
                2 * n + 1
            }
        };
        if self.coefficients.len() != want {
            return Err(Error::Dimension(format!(
                "expected {want} coefficients, found {}",
                self.coefficients.len()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Reconstruction = serde_json::from_str(s)?;
        r.validate()?;
        Ok(r)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        match self.basis {
            Basis::Legendre => {
                let basis = crate::polyspace::orthonormal_legendre_values(self.coefficients.len() - 1, x);
                self.coefficients.iter().zip(&basis).map(|(c, b)| c * b).sum()
            }
            Basis::ExtensionFourier => {
                let n = self.parameters.n as i64;
                let w = std::f64::consts::PI * x / self.parameters.t.unwrap_or(f64::NAN);
                self.coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| c * Complex64::cis((i as i64 - n) as f64 * w))
                    .sum()
            }
        }
    }
}

impl Evaluable for Reconstruction {
    fn value(&self, x: f64) -> Complex64 {
        self.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn l2_error_examples() {
        let f = TestFunction::Runge(3.0);
        assert!(l2_error(&f, &f).unwrap() < 1e-13);
        let one = TestFunction::Cosine(0.0);
        let zero = |_x: f64| Complex64::new(0.0, 0.0);
        assert!((l2_error(&one, &zero).unwrap() - SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn truncated_series_is_far_worse_than_reconstructions() {
        // Gibbs baseline: the L2 error of F_m f decays like m^{-1/2}
        let f = TestFunction::RealPole(9.0);
        let m = 100;
        let c = f.coeffs_exact(m).unwrap();
        let raw = l2_error(&f, &c).unwrap();
        // jump f(1) - f(-1) over pi sqrt(m) up to a constant of order one
        let jump = f.eval(1.0) - f.eval(-1.0);
        let scale = jump.abs() / (std::f64::consts::PI * (m as f64).sqrt());
        assert!(raw > 0.2 * scale && raw < 5.0 * scale, "raw={raw} scale={scale}");
        let (p, _) = poly_ls(&c, 10).unwrap();
        let rec = l2_error(&f, &p).unwrap();
        assert!(rec < 1e-3 * raw, "rec={rec} raw={raw}");
    }

    #[test]
    fn json_round_trip() {
        let f = TestFunction::ExpLayer(1.0);
        let c = f.coeffs_exact(12).unwrap();
        for (method, t) in [
            (Method::Iprm, None),
            (Method::PolyLs, None),
            (Method::FourierExtension, Some(2.0)),
        ] {
            let r = Reconstruction::compute(method, &c, 5, t).unwrap();
            let back = Reconstruction::from_json(&r.to_json().unwrap()).unwrap();
            assert_eq!(back, r);
            let err = l2_error(&f, &back).unwrap();
            assert!(err < 1e-3, "{method} {err}");
        }
        assert!(Reconstruction::compute(Method::FourierExtension, &c, 5, None).is_err());
    }

    #[test]
    fn json_rejects_wrong_length() {
        let c = TestFunction::ExpLayer(1.0).coeffs_exact(4).unwrap();
        let mut r = Reconstruction::compute(Method::PolyLs, &c, 2, None).unwrap();
        r.coefficients.pop();
        assert!(Reconstruction::from_json(&r.to_json().unwrap()).is_err());
    }

    #[test]
    fn method_names() {
        for m in [Method::Iprm, Method::PolyLs, Method::FourierExtension] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert_eq!("fe".parse::<Method>().unwrap(), Method::FourierExtension);
        assert!("x".parse::<Method>().is_err());
    }
}
