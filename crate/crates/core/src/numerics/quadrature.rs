//! Gauss–Legendre and equispaced trapezoid rules on `[-1, 1]`.

use std::f64::consts::PI;

use super::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Largest Gauss–Legendre order accepted by [`gauss_legendre`].
pub const MAX_GAUSS_ORDER: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::Dimension(format!(
                "{} nodes vs {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        Ok(QuadratureRule { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[-1, 1]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Integrates `f` over `[a, b]` by the affine change of variables.
    pub fn integrate_on<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.integrate(|t| f(mid + half * t))
    }

    /// The rule mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|&t| mid + half * t).collect();
        let weights = self.weights.iter().map(|&w| half * w).collect();
        (nodes, weights)
    }

    /// Composite rule: `panels` equal sub-intervals of `[-1, 1]`, each carrying this rule.
    pub fn composite(&self, panels: usize) -> QuadratureRule {
        let panels = panels.max(1);
        let mut nodes = Vec::with_capacity(panels * self.order());
        let mut weights = Vec::with_capacity(panels * self.order());
        // shared endpoints are computed by the same expression so panels tile exactly
        let edge = |p: usize| -1.0 + (2 * p) as f64 / panels as f64;
        for p in 0..panels {
            let a = edge(p);
            let b = edge(p + 1);
            let (x, w) = self.mapped(a, b);
            nodes.extend(x);
            weights.extend(w);
        }
        QuadratureRule { nodes, weights }
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / ((x - 1.0) * (x + 1.0));
    (p1, dp)
}

/// Orders up to this get their weights from a double-double recurrence.
const DD_WEIGHT_ORDER: usize = 2048;

/// `P_n(x)` and `P_{n-1}(x)` in double-double.
fn legendre_pair_dd(n: usize, x: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let mut p0 = DoubleDouble::ONE;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = (x * p1 * (2.0 * kf - 1.0) - p0 * (kf - 1.0)) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Weight belonging to the root near `x`, which is first refined by one
/// double-double Newton step so the node rounding does not leak into it.
fn weight_dd(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let deriv = |x: DoubleDouble| {
        let (p, q) = legendre_pair_dd(n, x);
        let one_minus_x2 = DoubleDouble::ONE - x * x;
        (p, (q - x * p) * nf / one_minus_x2, one_minus_x2)
    };
    let x0 = DoubleDouble::from_f64(x);
    let (p, dp, _) = deriv(x0);
    let root = x0 - p / dp;
    let (_, dp, one_minus_x2) = deriv(root);
    (DoubleDouble::from_f64(2.0) / (one_minus_x2 * dp * dp)).to_f64()
}

/// The `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes in increasing order.
///
/// Nodes are found by Newton's method from Tricomi's initial approximation and
/// mirrored, so the rule is exactly symmetric about the origin.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss–Legendre order must be >= 1".into()));
    }
    if n > MAX_GAUSS_ORDER {
        return Err(Error::QuadratureCap {
            requested: n,
            cap: MAX_GAUSS_ORDER,
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let half = n / 2;
    for i in 0..half {
        // i-th largest root
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
        let w = if n <= DD_WEIGHT_ORDER {
            weight_dd(n, x)
        } else {
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            2.0 / ((1.0 - x) * (1.0 + x) * dp * dp)
        };
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[half] = 0.0;
        weights[half] = if n <= DD_WEIGHT_ORDER {
            weight_dd(n, 0.0)
        } else {
            let (_, dp) = legendre_with_derivative(n, 0.0);
            2.0 / (dp * dp)
        };
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Composite trapezoid rule on `count` equispaced nodes of `[-1, 1]`, endpoints included.
pub fn trapezoid(count: usize) -> Result<QuadratureRule> {
    if count < 2 {
        return Err(Error::InvalidArgument(
            "trapezoid rule needs at least 2 nodes".into(),
        ));
    }
    let h = 2.0 / (count - 1) as f64;
    let nodes = (0..count)
        .map(|i| {
            if i + 1 == count {
                1.0
            } else {
                -1.0 + i as f64 * h
            }
        })
        .collect();
    let mut weights = vec![h; count];
    weights[0] = 0.5 * h;
    weights[count - 1] = 0.5 * h;
    Ok(QuadratureRule { nodes, weights })
}
