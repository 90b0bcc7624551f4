use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature_coeffs::{coeffs_by_quadrature, CoeffQuadrature};
use super::{sinc_pi, CoeffVec};
use crate::error::{Error, Result};

/// Analytic test functions on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "param", rename_all = "lowercase")]
pub enum TestFunction {
    /// `e^{a (x - 1)}`
    ExpLayer(f64),
    /// `1 / (a + 1 - a x)`
    RealPole(f64),
    /// `1 / (1 + a^2 x^2)`
    Runge(f64),
    /// `cos(omega pi x)`
    Cosine(f64),
}

/// Parameter of the largest Bernstein ellipse of analyticity; infinite for entire functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinRadius {
    pub rho: f64,
}

impl BernsteinRadius {
    pub fn is_entire(&self) -> bool {
        self.rho.is_infinite()
    }
}

impl TestFunction {
    /// The eight functions of the error comparison experiment.
    pub fn comparison_set() -> [TestFunction; 8] {
        let s2 = std::f64::consts::SQRT_2;
        [
            TestFunction::ExpLayer(1.0),
            TestFunction::ExpLayer(100.0),
            TestFunction::RealPole(9.0),
            TestFunction::RealPole(49.0),
            TestFunction::Runge(5.0),
            TestFunction::Runge(10.0),
            TestFunction::Cosine(7.0 * s2),
            TestFunction::Cosine(14.0 * s2),
        ]
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            TestFunction::ExpLayer(a)
            | TestFunction::RealPole(a)
            | TestFunction::Runge(a)
            | TestFunction::Cosine(a) => a,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            TestFunction::ExpLayer(_) => "explayer",
            TestFunction::RealPole(_) => "realpole",
            TestFunction::Runge(_) => "runge",
            TestFunction::Cosine(_) => "cosine",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.parameter();
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{} parameter must be finite and non-negative, got {a}",
                self.family()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            TestFunction::ExpLayer(a) => (a * (x - 1.0)).exp(),
            TestFunction::RealPole(a) => 1.0 / (a + 1.0 - a * x),
            TestFunction::Runge(a) => 1.0 / (1.0 + a * a * x * x),
            TestFunction::Cosine(w) => (w * PI * x).cos(),
        }
    }

    pub fn eval_complex(&self, x: f64) -> Complex64 {
        Complex64::new(self.eval(x), 0.0)
    }

    /// `f^_j` for `|j| <= m`: closed forms for the entire families, panel
    /// quadrature for the rational ones.
    pub fn coeffs_exact(&self, m: usize) -> Result<CoeffVec> {
        self.coeffs_with(m, CoeffQuadrature::default())
    }

    pub fn coeffs_with(&self, m: usize, quad: CoeffQuadrature) -> Result<CoeffVec> {
        self.validate()?;
        match *self {
            TestFunction::ExpLayer(a) => {
                // int e^{a(x-1)} e^{-i j pi x} = (-1)^j (1 - e^{-2a}) / (a - i j pi)
                let num = -(-2.0 * a).exp_m1();
                Ok(CoeffVec::from_fn(m, |j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    let v = if j == 0 {
                        let mean = if a == 0.0 { 2.0 } else { num / a };
                        Complex64::new(mean, 0.0)
                    } else {
                        Complex64::new(num, 0.0) / Complex64::new(a, -(j as f64) * PI)
                    };
                    v * sign * FRAC_1_SQRT_2
                }))
            }
            TestFunction::Cosine(w) => Ok(CoeffVec::from_fn(m, |j| {
                let jf = j as f64;
                Complex64::new(FRAC_1_SQRT_2 * (sinc_pi(w - jf) + sinc_pi(w + jf)), 0.0)
            })),
            TestFunction::RealPole(_) | TestFunction::Runge(_) => {
                let f = *self;
                coeffs_by_quadrature(move |x| f.eval(x), m, quad)
            }
        }
    }

    pub fn bernstein_radius(&self) -> BernsteinRadius {
        let rho = match *self {
            TestFunction::ExpLayer(_) | TestFunction::Cosine(_) => f64::INFINITY,
            TestFunction::RealPole(a) => {
                if a == 0.0 {
                    f64::INFINITY
                } else {
                    let x0 = (a + 1.0) / a;
                    x0 + (x0 * x0 - 1.0).sqrt()
                }
            }
            TestFunction::Runge(a) => {
                if a == 0.0 {
                    f64::INFINITY
                } else {
                    (1.0 + (1.0 + a * a).sqrt()) / a
                }
            }
        };
        BernsteinRadius { rho }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family(), self.parameter())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Accepts `family:param` or `family(param)`; the parameter may carry a
    /// `sqrt2` factor, as in `cosine:7sqrt2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = if let Some((n, a)) = s.split_once(':') {
            (n, a)
        } else if let (Some(open), true) = (s.find('('), s.ends_with(')')) {
            (&s[..open], &s[open + 1..s.len() - 1])
        } else {
            return Err(Error::InvalidArgument(format!(
                "test function {s:?} is not of the form family:param"
            )));
        };
        let arg = arg.trim().to_ascii_lowercase();
        let param = parse_param(&arg)
            .ok_or_else(|| Error::InvalidArgument(format!("bad parameter {arg:?}")))?;
        let f = match name.trim().to_ascii_lowercase().as_str() {
            "explayer" | "exp" => TestFunction::ExpLayer(param),
            "realpole" | "pole" => TestFunction::RealPole(param),
            "runge" => TestFunction::Runge(param),
            "cosine" | "cos" => TestFunction::Cosine(param),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown test function family {other:?}"
                )))
            }
        };
        f.validate()?;
        Ok(f)
    }
}

fn parse_param(arg: &str) -> Option<f64> {
    if let Some(head) = arg.strip_suffix("sqrt2") {
        let head = head.trim_end_matches('*').trim();
        let k = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>().ok()?
        };
        return Some(k * std::f64::consts::SQRT_2);
    }
    arg.parse::<f64>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gauss_legendre;
    use std::f64::consts::SQRT_2;

    fn quad_coeff(f: &TestFunction, j: i64, n: usize) -> Complex64 {
        let r = gauss_legendre(n).unwrap();
        let re = r.integrate(|x| f.eval(x) * (j as f64 * PI * x).cos());
        let im = -r.integrate(|x| f.eval(x) * (j as f64 * PI * x).sin());
        Complex64::new(re, im) * FRAC_1_SQRT_2
    }

    #[test]
    fn constant_exp_layer() {
        let c = TestFunction::ExpLayer(0.0).coeffs_exact(6).unwrap();
        assert!((c.get(0).re - SQRT_2).abs() < 1e-15);
        for j in 1..=6 {
            assert_eq!(c.get(j).norm(), 0.0);
        }
    }

    #[test]
    fn exp_layer_mean() {
        let f = TestFunction::ExpLayer(1.0);
        let c0 = f.coeffs_exact(0).unwrap().get(0);
        let want = (1.0 - (-2.0f64).exp()) / SQRT_2;
        assert!((c0.re - want).abs() < 1e-15);
        assert!((c0.re - 0.6114103).abs() < 1e-7);
        assert!((quad_coeff(&f, 0, 200) - c0).norm() < 1e-15);
    }

    #[test]
    fn cosine_limits() {
        let c = TestFunction::Cosine(0.0).coeffs_exact(3).unwrap();
        assert!((c.get(0).re - SQRT_2).abs() < 1e-15);
        let c = TestFunction::Cosine(3.0).coeffs_exact(5).unwrap();
        // cos(3 pi x) = (e^{3i pi x} + e^{-3i pi x}) / 2 has c_{+-3} = 1/sqrt 2
        assert!((c.get(3).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((c.get(-3).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(c.get(2).norm() < 1e-16);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for f in [
            TestFunction::ExpLayer(1.0),
            TestFunction::ExpLayer(100.0),
            TestFunction::Cosine(7.0 * SQRT_2),
            TestFunction::Cosine(14.0 * SQRT_2),
        ] {
            let exact = f.coeffs_exact(200).unwrap();
            let quad = coeffs_by_quadrature(|x| f.eval(x), 200, CoeffQuadrature::default()).unwrap();
            let scale = exact.norm();
            for (j, v) in exact.iter() {
                let d = (v - quad.get(j)).norm();
                assert!(d <= 1e-12 * v.norm() + 1e-14 * scale, "{f} j={j} {v} {}", quad.get(j));
            }
        }
    }

    #[test]
    fn rational_coefficients_match_references() {
        // 30-digit adaptive quadrature values
        let refs: [(TestFunction, i64, f64, f64); 12] = [
            (TestFunction::RealPole(9.0), 0, 0.23133697432873173102, 0.0),
            (TestFunction::RealPole(9.0), 7, -0.0084749264409246523849, -0.025299047809877132358),
            (TestFunction::RealPole(9.0), 200, 0.000016055683790028471423, 0.0010657034491388230572),
            (TestFunction::RealPole(49.0), 1, -0.032336821161921209754, -0.017508821436727397614),
            (TestFunction::RealPole(49.0), 40, 0.0014541671802193519153, 0.0047178655636543699606),
            (TestFunction::RealPole(49.0), 200, 0.000084871037202054666593, 0.0011011977066554167168),
            (TestFunction::Runge(5.0), 0, 0.38845639823745035298, 0.0),
            (TestFunction::Runge(5.0), 7, 0.0056761000684350324845, 0.0),
            (TestFunction::Runge(5.0), 200, -2.6495178715068992925e-7, 0.0),
            (TestFunction::Runge(10.0), 1, 0.16388627140228782253, 0.0),
            (TestFunction::Runge(10.0), 40, -9.7984496715542519277e-7, 0.0),
            (TestFunction::Runge(10.0), 200, -7.0231136849190831813e-8, 0.0),
        ];
        for (f, j, re, im) in refs {
            let c = f.coeffs_exact(200).unwrap();
            let scale = c.norm();
            let want = Complex64::new(re, im);
            let d = (c.get(j) - want).norm();
            assert!(d <= 1e-12 * want.norm() + 1e-14 * scale, "{f} j={j}: {}", c.get(j));
            assert!(c.conjugate_symmetry_defect() == 0.0);
        }
    }

    #[test]
    fn bernstein_radii() {
        let r = TestFunction::RealPole(9.0).bernstein_radius().rho;
        assert!((r - (10.0 + 19f64.sqrt()) / 9.0).abs() < 1e-15);
        assert!((r - 1.5954).abs() < 1e-4);
        let r = TestFunction::Runge(5.0).bernstein_radius().rho;
        assert!((r - (1.0 + 26f64.sqrt()) / 5.0).abs() < 1e-15);
        assert!((r - 1.2198).abs() < 1e-4);
        assert!(TestFunction::ExpLayer(3.0).bernstein_radius().is_entire());
        assert!(TestFunction::Cosine(3.0).bernstein_radius().is_entire());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for f in TestFunction::comparison_set() {
            let back: TestFunction = f.to_string().parse().unwrap();
            assert_eq!(back, f);
        }
        let c: TestFunction = "cosine:7sqrt2".parse().unwrap();
        assert_eq!(c, TestFunction::Cosine(7.0 * SQRT_2));
        let r: TestFunction = "Runge(5)".parse().unwrap();
        assert_eq!(r, TestFunction::Runge(5.0));
        assert!("runge:-1".parse::<TestFunction>().is_err());
        assert!("spline:1".parse::<TestFunction>().is_err());
        assert!("runge".parse::<TestFunction>().is_err());
    }
}
