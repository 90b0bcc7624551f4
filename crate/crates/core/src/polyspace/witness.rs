use serde::{Deserialize, Serialize};

use super::correspondence::TPolyCoeffs;
use crate::error::{Error, Result};

/// Largest `q` whose witness may be expanded in monomials.
pub const MAX_MONOMIAL_Q: usize = 2;

/// `T_q(M(x))` with `M` the affine map from `[a, b]` onto `[-1, 1]`.
pub fn eval_chebyshev_shifted(q: usize, a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::DegenerateInterval { a, b });
    }
    let y = (2.0 * x - (a + b)) / (b - a);
    Ok(chebyshev(q, y))
}

/// `T_q(y)`: three-term recurrence on `[-1, 1]`, closed growth form outside.
pub fn chebyshev(q: usize, y: f64) -> f64 {
    if y.abs() <= 1.0 {
        if q == 0 {
            return 1.0;
        }
        let (mut t0, mut t1) = (1.0, y);
        for _ in 1..q {
            let t2 = 2.0 * y * t1 - t0;
            t0 = t1;
            t1 = t2;
        }
        return t1;
    }
    let ya = y.abs();
    let big = ya + ((ya - 1.0) * (ya + 1.0)).sqrt();
    // the smaller root is 1/big; this avoids the cancellation in y - sqrt(y^2-1)
    let v = 0.5 * (big.powi(q as i32) + big.powi(-(q as i32)));
    if y < 0.0 && q % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `P(t) = t T_q*(t^2) prod_{i=1}^q (t^2 - 1/i^2)`, where `T_q*` is the
/// Chebyshev polynomial of degree `q` on `[1/m^2, 1/(q+1)^2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoly {
    q: usize,
    m: usize,
}

pub fn build_witness(q: usize, m: usize) -> Result<WitnessPoly> {
    if q == 0 {
        return Err(Error::InvalidArgument("witness needs q >= 1".into()));
    }
    if m < q + 2 {
        return Err(Error::DegenerateInterval {
            a: 1.0 / (m as f64).powi(2),
            b: 1.0 / ((q + 1) as f64).powi(2),
        });
    }
    Ok(WitnessPoly { q, m })
}

impl WitnessPoly {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Degree in `t`, `4q + 1`.
    pub fn degree(&self) -> usize {
        4 * self.q + 1
    }

    /// The Chebyshev interval `[1/m^2, 1/(q+1)^2]`.
    pub fn interval(&self) -> (f64, f64) {
        (
            1.0 / (self.m as f64).powi(2),
            1.0 / ((self.q + 1) as f64).powi(2),
        )
    }

    pub fn chebyshev_factor(&self, s: f64) -> f64 {
        let (a, b) = self.interval();
        chebyshev(self.q, (2.0 * s - (a + b)) / (b - a))
    }

    /// `A_q(s) = prod_{i=1}^q (s - 1/i^2)`.
    pub fn zero_factor(&self, s: f64) -> f64 {
        (1..=self.q)
            .map(|i| {
                let r = 1.0 / (i as f64);
                // (t - r)(t + r) keeps relative accuracy near the zeros
                let t = s.sqrt();
                if s >= 0.0 {
                    (t - r) * (t + r)
                } else {
                    s - r * r
                }
            })
            .product()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = t * t;
        t * self.chebyshev_factor(s) * self.zero_factor(s)
    }

    /// Monomial coefficients of `P` as a function of `t`, for `q <= 2` only.
    pub fn monomial_coeffs(&self) -> Result<TPolyCoeffs> {
        if self.q > MAX_MONOMIAL_Q {
            return Err(Error::DegreeCap {
                degree: self.degree(),
                cap: 4 * MAX_MONOMIAL_Q + 1,
            });
        }
        let (a, b) = self.interval();
        // M(s) = alpha s + beta
        let alpha = 2.0 / (b - a);
        let beta = -(a + b) / (b - a);
        let m_poly = vec![beta, alpha];
        let mut t0 = vec![1.0];
        let mut t1 = m_poly.clone();
        for _ in 1..self.q {
            let mut t2 = poly_mul(&m_poly, &t1);
            for v in t2.iter_mut() {
                *v *= 2.0;
            }
            for (i, v) in t0.iter().enumerate() {
                t2[i] -= v;
            }
            t0 = t1;
            t1 = t2;
        }
        let mut r = t1;
        for i in 1..=self.q {
            r = poly_mul(&r, &[-1.0 / (i * i) as f64, 1.0]);
        }
        // P(t) = t R(t^2): coefficient of t^{2i+1} is r_i
        let mut b = vec![0.0; self.degree()];
        for (i, v) in r.iter().enumerate() {
            b[2 * i] = *v;
        }
        Ok(TPolyCoeffs::from_real(&b))
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn chebyshev_endpoints() {
        for q in 0..8 {
            let lo = eval_chebyshev_shifted(q, 0.25, 2.0, 0.25).unwrap();
            let hi = eval_chebyshev_shifted(q, 0.25, 2.0, 2.0).unwrap();
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            assert!((lo - sign).abs() < 1e-14);
            assert!((hi - 1.0).abs() < 1e-14);
        }
        assert!(eval_chebyshev_shifted(2, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn chebyshev_matches_trig_and_hyperbolic_forms() {
        for q in 0..12 {
            for y in [-0.9, -0.3, 0.0, 0.41, 0.99] {
                let want = (q as f64 * f64::acos(y)).cos();
                assert!((chebyshev(q, y) - want).abs() < 1e-13);
            }
            for y in [1.5, 3.0, -2.25] {
                let want = (q as f64 * f64::acosh(f64::abs(y))).cosh()
                    * if y < 0.0 && q % 2 == 1 { -1.0 } else { 1.0 };
                assert!((chebyshev(q, y) - want).abs() <= 1e-13 * want.abs());
            }
        }
    }

    #[test]
    fn growth_just_outside_the_interval() {
        for q in 1..20 {
            for delta in [1e-6, 1e-3, 0.1, 1.0] {
                let v = chebyshev(q, 1.0 + delta);
                assert!(v > 0.5 * (1.0 + (2.0 * delta).sqrt()).powi(q as i32));
            }
        }
    }

    #[test]
    fn degenerate_interval() {
        assert!(matches!(
            build_witness(3, 4),
            Err(Error::DegenerateInterval { .. })
        ));
        assert!(build_witness(3, 5).is_ok());
        assert!(build_witness(0, 5).is_err());
    }

    #[test]
    fn zeros_and_chebyshev_endpoint() {
        for q in 1..=6 {
            for m in [q + 2, q + 7, 60] {
                let w = build_witness(q, m).unwrap();
                let scale = (1..=20).map(|i| w.eval(i as f64 / 20.0).abs()).fold(0.0, f64::max);
                for j in 1..=q {
                    let v = w.eval(1.0 / j as f64);
                    assert!(v.abs() <= 1e-12 * scale, "q={q} j={j} {v}");
                }
                let (a, _) = w.interval();
                assert!((w.chebyshev_factor(a).abs() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn monomial_expansion_matches_factored_form() {
        for q in 1..=2 {
            for m in [q + 2, 10, 50] {
                let w = build_witness(q, m).unwrap();
                let p = w.monomial_coeffs().unwrap();
                assert_eq!(p.degree(), 4 * q + 1);
                // rounding bound for monomial evaluation on |t| <= 1
                let scale: f64 = p.b.iter().map(|c| c.norm()).sum();
                for t in [0.013, 0.1, 0.37, 0.5, 1.0] {
                    let a = w.eval(t);
                    let b = p.eval_t(t).re;
                    assert!((a - b).abs() <= 1e-12 * a.abs().max(scale), "q={q} m={m} t={t}");
                }
            }
        }
        assert!(build_witness(3, 6).unwrap().monomial_coeffs().is_err());
    }

    #[test]
    fn interpolation_recovers_degree() {
        // Chebyshev interpolation through 4q+3 first-kind nodes
        for q in 1..=3 {
            let w = build_witness(q, q + 3).unwrap();
            let npts = 4 * q + 3;
            let nodes: Vec<f64> = (0..npts)
                .map(|i| (PI * (i as f64 + 0.5) / npts as f64).cos())
                .collect();
            let vals: Vec<f64> = nodes.iter().map(|&x| w.eval(x)).collect();
            let coeff: Vec<f64> = (0..npts)
                .map(|k| {
                    let s: f64 = nodes
                        .iter()
                        .zip(&vals)
                        .map(|(&x, &v)| v * chebyshev(k, x))
                        .sum();
                    s * 2.0 / npts as f64
                })
                .collect();
            let top = coeff.iter().map(|c| c.abs()).fold(0.0, f64::max);
            assert!(coeff[4 * q + 2].abs() < 1e-12 * top, "q={q}");
            assert!(coeff[4 * q + 1].abs() > 1e-6 * top, "q={q}");
        }
    }

    proptest! {
        #[test]
        fn witness_is_odd(q in 1usize..6, extra in 2usize..40, t in -1.0f64..1.0) {
            let w = build_witness(q, q + extra).unwrap();
            prop_assert_eq!(w.eval(-t), -w.eval(t));
        }
    }
}
