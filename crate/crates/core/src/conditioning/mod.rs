//! Condition numbers of the reconstruction maps and the parameter-selection
//! rule built on them.
//!
//! All maps here are linear, so the condition number is the operator norm from
//! coefficient `l^2` to `L^2(-1, 1)`. It is either exact (`1 / sigma_min` for
//! polynomial least squares), estimated from random coefficient vectors, or
//! computed by power iteration on the sampled map.

mod select;

pub use select::{select_max_n, Selection, SelectionParams, DEFAULT_WINDOW};

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::DEFAULT_NORM_NODES;
use crate::framebound::{bnm, PrecisionMode};
use crate::numerics::{gauss_legendre, trapezoid, Entry, QuadratureRule, MAX_GAUSS_ORDER};
use crate::polyspace::{legendre_fourier_matrix, orthonormal_legendre_values};
use crate::reconstruct::{fe_matrix, TruncatedSvd, DEFAULT_CUTOFF};

/// Trials used by the randomized estimator unless configured otherwise.
pub const DEFAULT_TRIALS: usize = 100;
/// Equispaced nodes for the randomized estimator's norm.
pub const RANDOMIZED_NODES: usize = 2001;
/// Power iterations stop once the estimate changes by less than this, relatively.
pub const POWER_TOL: f64 = 1e-8;
pub const DEFAULT_POWER_ITERS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CondMethod {
    #[serde(rename = "PLS")]
    Pls,
    #[serde(rename = "FE")]
    Fe,
}

impl CondMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CondMethod::Pls => "PLS",
            CondMethod::Fe => "FE",
        }
    }
}

impl fmt::Display for CondMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CondMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pls" => Ok(CondMethod::Pls),
            "fe" => Ok(CondMethod::Fe),
            _ => Err(Error::InvalidArgument(format!(
                "unknown method {s:?}; expected PLS or FE"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Estimator {
    SigmaMinExact,
    Randomized { trials: usize, seed: u64 },
    PowerIteration { iters: usize },
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::SigmaMinExact => "sigma_min_exact",
            Estimator::Randomized { .. } => "randomized",
            Estimator::PowerIteration { .. } => "power_iteration",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub method: CondMethod,
    pub n: usize,
    pub m: usize,
    pub t: Option<f64>,
    pub kappa: f64,
    pub estimator: Estimator,
    pub quadrature_nodes: usize,
}

impl ConditionReport {
    pub const CSV_HEADER: &'static str = "method,n,m,T,kappa,estimator,t,seed,quadrature_nodes";

    pub fn csv_row(&self) -> String {
        let (trials, seed) = match self.estimator {
            Estimator::Randomized { trials, seed } => (trials.to_string(), seed.to_string()),
            Estimator::PowerIteration { iters } => (iters.to_string(), String::new()),
            Estimator::SigmaMinExact => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{:.16e},{},{},{},{}",
            self.method,
            self.n,
            self.m,
            self.t.map(|t| t.to_string()).unwrap_or_default(),
            self.kappa,
            self.estimator.name(),
            trials,
            seed,
            self.quadrature_nodes
        )
    }

    pub fn write_csv<W: Write>(rows: &[ConditionReport], mut w: W, comment: Option<&str>) -> Result<()> {
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

/// `kappa_{n,m} = B_{2n,m}` for polynomial least squares of degree `2n`.
pub fn kappa_pls(n: usize, m: usize, mode: PrecisionMode) -> Result<ConditionReport> {
    if n > m {
        return Err(Error::InvalidArgument(format!(
            "polynomial least squares needs n <= m, got n = {n}, m = {m}"
        )));
    }
    let r = bnm(2 * n, m, mode)?;
    Ok(ConditionReport {
        method: CondMethod::Pls,
        n,
        m,
        t: None,
        kappa: r.b_value,
        estimator: Estimator::SigmaMinExact,
        quadrature_nodes: 0,
    })
}

/// A reconstruction map `b -> F(b)` sampled on a quadrature rule.
///
/// With `A = U S V^H` truncated to rank `r`, `F(b) = E V S^{-1} U^H b` where
/// `E` evaluates the basis. `samples` holds `sqrt(W) E V S^{-1}`, so
/// `||F(b)||_2 ~ ||samples (U^H b)||`.
#[derive(Debug, Clone)]
pub struct SampledMap {
    samples: DMatrix<Complex64>,
    u: DMatrix<Complex64>,
    rule_nodes: usize,
}

impl SampledMap {
    fn build<T: Entry>(
        a: DMatrix<T>,
        cutoff: f64,
        rule: &QuadratureRule,
        basis: impl Fn(f64) -> Vec<Complex64> + Sync,
    ) -> Result<Self> {
        let t = TruncatedSvd::new(a)?;
        let (u, s, v) = t.factors(cutoff);
        let cols = v.nrows();
        let r = s.len();
        let rows: Vec<Vec<Complex64>> = rule
            .nodes()
            .par_iter()
            .zip(rule.weights())
            .map(|(&x, &w)| {
                let sw = w.sqrt();
                basis(x).into_iter().map(|e| e * sw).collect()
            })
            .collect();
        // real products only: nalgebra multiplies complex matrices entry by entry
        let e_re = DMatrix::from_fn(rows.len(), cols, |i, k| rows[i][k].re);
        let e_im = DMatrix::from_fn(rows.len(), cols, |i, k| rows[i][k].im);
        let vs_re = DMatrix::from_fn(cols, r, |k, i| v[(k, i)].to_complex().re / s[i]);
        let vs_im = DMatrix::from_fn(cols, r, |k, i| v[(k, i)].to_complex().im / s[i]);
        let mut re = &e_re * &vs_re;
        let mut im = &e_im * &vs_re;
        if vs_im.iter().any(|&x| x != 0.0) {
            re -= &e_im * &vs_im;
            im += &e_re * &vs_im;
        }
        let samples = DMatrix::from_fn(re.nrows(), r, |i, k| Complex64::new(re[(i, k)], im[(i, k)]));
        Ok(SampledMap {
            samples,
            u: u.map(|z| z.to_complex()),
            rule_nodes: rule.order(),
        })
    }

    /// Polynomial least squares of degree `2n` from `|j| <= m`, no cutoff.
    pub fn pls(n: usize, m: usize, rule: &QuadratureRule) -> Result<Self> {
        let a = legendre_fourier_matrix(2 * n, m)?;
        Self::build(a, 0.0, rule, |x| {
            orthonormal_legendre_values(2 * n, x)
                .into_iter()
                .map(|v| Complex64::new(v, 0.0))
                .collect()
        })
    }

    /// Fourier extension in `S_n` on `[-T, T]` with the solver's cutoff.
    pub fn fe(n: usize, m: usize, t: f64, cutoff: f64, rule: &QuadratureRule) -> Result<Self> {
        let a = fe_matrix(n, m, t)?;
        let ni = n as i64;
        Self::build(a, cutoff, rule, |x| {
            (-ni..=ni)
                .map(|k| Complex64::cis(k as f64 * std::f64::consts::PI * x / t))
                .collect()
        })
    }

    pub fn rank(&self) -> usize {
        self.samples.ncols()
    }

    pub fn quadrature_nodes(&self) -> usize {
        self.rule_nodes
    }

    /// `||F(b)||_2 / ||b||`.
    pub fn ratio(&self, b: &DVector<Complex64>) -> f64 {
        let nb = b.norm();
        if nb == 0.0 {
            return 0.0;
        }
        let y = self.u.ad_mul(b);
        (&self.samples * y).norm() / nb
    }

    /// Largest ratio over `trials` normalized complex Gaussian vectors.
    ///
    /// Trial `i` draws from its own ChaCha stream, so the result does not
    /// depend on scheduling.
    pub fn randomized_norm(&self, trials: usize, seed: u64) -> Result<f64> {
        if trials == 0 {
            return Err(Error::InvalidArgument("need at least one trial".into()));
        }
        let dim = self.u.nrows();
        let best = (0..trials)
            .into_par_iter()
            .map(|i| {
                let b = gaussian_vector(dim, seed, i as u64);
                self.ratio(&b)
            })
            .reduce(|| 0.0, f64::max);
        Ok(best)
    }

    /// `sigma_max(samples)` by power iteration on `samples^H samples`.
    /// Returns the estimate and the iterations used.
    pub fn power_norm(&self, iters: usize) -> Result<(f64, usize)> {
        if iters < 10 {
            return Err(Error::InvalidArgument(format!(
                "power iteration needs at least 10 iterations, got {iters}"
            )));
        }
        let r = self.rank();
        if r == 0 {
            return Ok((0.0, 0));
        }
        // every coordinate nonzero, so no singular direction is missed
        let mut x = DVector::from_fn(r, |i, _| Complex64::new(1.0, 0.1 * i as f64));
        x /= Complex64::new(x.norm(), 0.0);
        let mut est = 0.0;
        for it in 1..=iters {
            let y = &self.samples * &x;
            let next = y.norm();
            let z = self.samples.ad_mul(&y);
            let zn = z.norm();
            if zn == 0.0 {
                return Ok((0.0, it));
            }
            x = z / Complex64::new(zn, 0.0);
            if (next - est).abs() <= POWER_TOL * next {
                return Ok((next, it));
            }
            est = next;
        }
        Ok((est, iters))
    }
}

/// Normalized complex Gaussian vector from substream `(seed, trial)`.
pub fn gaussian_vector(dim: usize, seed: u64, trial: u64) -> DVector<Complex64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let v = DVector::from_fn(dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    Ok(())
}

/// Gauss–Legendre rule fine enough for `|g|^2` with `g` of frequency up to `omega`.
fn power_rule(omega: f64) -> Result<QuadratureRule> {
    let n = (DEFAULT_NORM_NODES as f64).max((omega).ceil() + 64.0) as usize;
    gauss_legendre(n.min(MAX_GAUSS_ORDER))
}

/// The sampled estimate of the extension condition number: the largest
/// `||F(b)||_2 / ||b||` over `trials` random directions, with the norm taken
/// by the trapezoid rule on 2001 equispaced nodes.
pub fn kappa_fe_randomized(n: usize, m: usize, t: f64, trials: usize, seed: u64) -> Result<ConditionReport> {
    check_trials(trials)?;
    let rule = trapezoid(RANDOMIZED_NODES)?;
    let map = SampledMap::fe(n, m, t, DEFAULT_CUTOFF, &rule)?;
    Ok(ConditionReport {
        method: CondMethod::Fe,
        n,
        m,
        t: Some(t),
        kappa: map.randomized_norm(trials, seed)?,
        estimator: Estimator::Randomized { trials, seed },
        quadrature_nodes: RANDOMIZED_NODES,
    })
}

/// The extension condition number by power iteration, with the norm on a
/// Gauss–Legendre rule that integrates the map's output to full accuracy.
pub fn kappa_fe_power(n: usize, m: usize, t: f64, iters: usize) -> Result<ConditionReport> {
    let rule = power_rule(n as f64 * std::f64::consts::PI / t)?;
    let map = SampledMap::fe(n, m, t, DEFAULT_CUTOFF, &rule)?;
    let (kappa, _) = map.power_norm(iters)?;
    Ok(ConditionReport {
        method: CondMethod::Fe,
        n,
        m,
        t: Some(t),
        kappa,
        estimator: Estimator::PowerIteration { iters },
        quadrature_nodes: rule.order(),
    })
}

/// The randomized estimator applied to polynomial least squares.
pub fn kappa_pls_randomized(n: usize, m: usize, trials: usize, seed: u64) -> Result<ConditionReport> {
    check_trials(trials)?;
    if n > m {
        return Err(Error::InvalidArgument(format!(
            "polynomial least squares needs n <= m, got n = {n}, m = {m}"
        )));
    }
    let rule = trapezoid(RANDOMIZED_NODES)?;
    let map = SampledMap::pls(n, m, &rule)?;
    Ok(ConditionReport {
        method: CondMethod::Pls,
        n,
        m,
        t: None,
        kappa: map.randomized_norm(trials, seed)?,
        estimator: Estimator::Randomized { trials, seed },
        quadrature_nodes: RANDOMIZED_NODES,
    })
}

/// Power iteration applied to polynomial least squares.
pub fn kappa_pls_power(n: usize, m: usize, iters: usize) -> Result<ConditionReport> {
    if n > m {
        return Err(Error::InvalidArgument(format!(
            "polynomial least squares needs n <= m, got n = {n}, m = {m}"
        )));
    }
    // exact for polynomials of degree 4n
    let rule = gauss_legendre((2 * n + 1).max(2))?;
    let map = SampledMap::pls(n, m, &rule)?;
    let (kappa, _) = map.power_norm(iters)?;
    Ok(ConditionReport {
        method: CondMethod::Pls,
        n,
        m,
        t: None,
        kappa,
        estimator: Estimator::PowerIteration { iters },
        quadrature_nodes: rule.order(),
    })
}

/// Dispatches to the estimator named in `est`.
pub fn kappa(
    method: CondMethod,
    n: usize,
    m: usize,
    t: Option<f64>,
    est: Estimator,
    mode: PrecisionMode,
) -> Result<ConditionReport> {
    match (method, est) {
        (CondMethod::Pls, Estimator::SigmaMinExact) => kappa_pls(n, m, mode),
        (CondMethod::Pls, Estimator::Randomized { trials, seed }) => kappa_pls_randomized(n, m, trials, seed),
        (CondMethod::Pls, Estimator::PowerIteration { iters }) => kappa_pls_power(n, m, iters),
        (CondMethod::Fe, _) => {
            let t = t.ok_or_else(|| Error::InvalidArgument("Fourier extension needs T".into()))?;
            match est {
                Estimator::Randomized { trials, seed } => kappa_fe_randomized(n, m, t, trials, seed),
                Estimator::PowerIteration { iters } => kappa_fe_power(n, m, t, iters),
                Estimator::SigmaMinExact => Err(Error::InvalidArgument(
                    "the extension map has no exact singular-value formula; use randomized or power".into(),
                )),
            }
        }
    }
}
