use num_complex::Complex64;
use rayon::prelude::*;

use super::CoeffVec;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, CompensatedSum, QuadratureRule};

/// Panel quadrature settings for Fourier coefficients of real functions.
///
/// The panel count starts at `max(min_panels, m)` and is doubled until two
/// consecutive levels agree for every `j`, or `max_panels` is exceeded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffQuadrature {
    pub nodes_per_panel: usize,
    pub min_panels: usize,
    pub max_panels: usize,
    pub rel_tol: f64,
}

impl Default for CoeffQuadrature {
    fn default() -> Self {
        CoeffQuadrature {
            nodes_per_panel: 16,
            min_panels: 8,
            max_panels: 1 << 15,
            rel_tol: 1e-13,
        }
    }
}

/// `(1/sqrt 2) int f(x) e^{-i j pi x} dx` for `|j| <= m` and real `f`.
pub fn coeffs_by_quadrature<F>(f: F, m: usize, opts: CoeffQuadrature) -> Result<CoeffVec>
where
    F: Fn(f64) -> f64 + Sync,
{
    let base = gauss_legendre(opts.nodes_per_panel)?;
    let mut panels = opts.min_panels.max(m).max(1);
    let mut prev = level(&f, &base, panels, m);
    let mut worst = 0;
    while panels * 2 <= opts.max_panels {
        panels *= 2;
        let next = level(&f, &base, panels, m);
        // Roundoff floor. Node rounding perturbs the phase of term j by about
        // pi j ulp, and those errors average out over the nodes.
        let nodes = (panels * opts.nodes_per_panel) as f64;
        let unit = 4.0 * f64::EPSILON * next.1 / nodes.sqrt();
        let converged = prev
            .0
            .iter()
            .zip(&next.0)
            .enumerate()
            .all(|(j, (a, b))| {
                let floor = unit * (1.0 + std::f64::consts::PI * j as f64);
                (a - b).norm() <= opts.rel_tol * b.norm() + floor
            });
        if converged {
            return Ok(mirror(m, next.0));
        }
        worst = worst_index(&prev.0, &next.0);
        prev = next;
    }
    Err(Error::QuadratureBudget {
        j: worst as i64,
        budget: opts.max_panels,
    })
}

fn worst_index(a: &[Complex64], b: &[Complex64]) -> usize {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(j, (x, y))| (j, (x - y).norm() / y.norm().max(f64::MIN_POSITIVE)))
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc })
        .0
}

/// Coefficients for `j = 0..=m` and the value of `(1/sqrt 2) sum |w f|`.
fn level<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    base: &QuadratureRule,
    panels: usize,
    m: usize,
) -> (Vec<Complex64>, f64) {
    let rule = base.composite(panels);
    let wf: Vec<(f64, f64)> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| (x, w * f(x)))
        .collect();
    let l1 = wf.iter().map(|p| p.1.abs()).sum::<f64>() * std::f64::consts::FRAC_1_SQRT_2;
    let coeffs = (0..=m)
        .into_par_iter()
        .map(|j| {
            let jf = j as f64;
            // the terms oscillate and cancel, so accumulate in double-double
            let mut re = CompensatedSum::new();
            let mut im = CompensatedSum::new();
            for &(x, v) in &wf {
                let (s, c) = sin_cos_pi_product(jf, x);
                re.add_product(v, c);
                im.add_product(-v, s);
            }
            Complex64::new(re.value(), im.value()) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    (coeffs, l1)
}

/// `sin(pi a b)` and `cos(pi a b)` with the product `a b` reduced modulo 2 exactly.
pub(crate) fn sin_cos_pi_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    let r = p - 2.0 * (0.5 * p).round();
    (std::f64::consts::PI * (r + e)).sin_cos()
}

fn mirror(m: usize, nonneg: Vec<Complex64>) -> CoeffVec {
    CoeffVec::from_fn(m, |j| {
        if j >= 0 {
            nonneg[j as usize]
        } else {
            nonneg[(-j) as usize].conj()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn coefficients_of_x() {
        // x^_j = sqrt 2 i (-1)^j / (j pi) for j != 0
        let c = coeffs_by_quadrature(|x| x, 30, CoeffQuadrature::default()).unwrap();
        assert!(c.get(0).norm() < 1e-16);
        for j in 1..=30i64 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let want = Complex64::new(0.0, SQRT_2 * sign / (j as f64 * PI));
            assert!((c.get(j) - want).norm() < 1e-14, "j={j}");
            assert_eq!(c.get(-j), c.get(j).conj());
        }
    }

    #[test]
    fn budget_exhaustion_names_an_index() {
        let opts = CoeffQuadrature {
            max_panels: 16,
            ..CoeffQuadrature::default()
        };
        // pole at distance 1e-4 from the interval
        let r = coeffs_by_quadrature(|x| 1.0 / (1.0001 - x), 4, opts);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }
}
