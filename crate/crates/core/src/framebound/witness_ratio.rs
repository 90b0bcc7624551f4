use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::{CompensatedSum, DoubleDouble};
use crate::polyspace::build_witness;

/// Terms summed explicitly in the numerator of the witness ratio.
pub const WITNESS_TRUNCATION: usize = 1_000_000;

const CHUNK: usize = 1 << 14;

/// `B(4q+1, m, P)` for the witness `P`, with the pieces of the computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessRatio {
    pub q: usize,
    pub m: usize,
    pub ratio: f64,
    /// `sum_{j >= 1} P(1/j)^2`, including the tail estimate.
    pub numerator: f64,
    /// `sum_{j=1}^m P(1/j)^2`.
    pub denominator: f64,
    /// Last index summed explicitly.
    pub truncation: usize,
    /// `J P(1/J)^2`, standing in for `sum_{j > J} P(1/j)^2`.
    pub tail: f64,
    /// `tail / numerator`; the neglected error is of order `tail / J`.
    pub tail_relative: f64,
}

/// `sum_{j=lo}^{hi} P(1/j)^2` in double-double, deterministic in chunk order.
fn sum_squares<F: Fn(f64) -> f64 + Sync>(p: &F, lo: usize, hi: usize) -> DoubleDouble {
    if hi < lo {
        return DoubleDouble::ZERO;
    }
    let chunks: Vec<(usize, usize)> = (lo..=hi)
        .step_by(CHUNK)
        .map(|a| (a, (a + CHUNK - 1).min(hi)))
        .collect();
    let parts: Vec<DoubleDouble> = chunks
        .par_iter()
        .map(|&(a, b)| {
            let mut s = CompensatedSum::new();
            // small terms first
            for j in (a..=b).rev() {
                let v = p(1.0 / j as f64);
                s.add_product(v, v);
            }
            s.total()
        })
        .collect();
    parts.into_iter().rev().fold(DoubleDouble::ZERO, |acc, x| acc + x)
}

pub fn witness_ratio_detailed(q: usize, m: usize) -> Result<WitnessRatio> {
    let w = build_witness(q, m)?;
    let p = |t: f64| w.eval(t);
    let j_max = WITNESS_TRUNCATION.max(m);
    let head = sum_squares(&p, 1, m);
    let rest = sum_squares(&p, m + 1, j_max);
    let last = p(1.0 / j_max as f64);
    let tail = j_max as f64 * last * last;
    let numerator = (head + rest + tail).to_f64();
    let denominator = head.to_f64();
    Ok(WitnessRatio {
        q,
        m,
        ratio: (numerator / denominator).sqrt(),
        numerator,
        denominator,
        truncation: j_max,
        tail,
        tail_relative: tail / numerator,
    })
}

/// `B(4q+1, m, P) = sqrt(sum_{|j| >= 1} |P(1/j)|^2 / sum_{1 <= |j| <= m} |P(1/j)|^2)`.
pub fn witness_ratio(q: usize, m: usize) -> Result<f64> {
    Ok(witness_ratio_detailed(q, m)?.ratio)
}

/// `sqrt(1 + q/(2m) + (q/(4m)) gamma^{2q^2/m})` with `gamma = (1 + q/m)^{m/q}`.
pub fn witness_lower_bound(q: usize, m: usize) -> f64 {
    let (qf, mf) = (q as f64, m as f64);
    let gamma = (1.0 + qf / mf).powf(mf / qf);
    (1.0 + qf / (2.0 * mf) + qf / (4.0 * mf) * gamma.powf(2.0 * qf * qf / mf)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn ratio_exceeds_one_and_the_lower_bound() {
        for q in 1..=3 {
            for m in [q + 2, q + 5, 30] {
                let r = witness_ratio_detailed(q, m).unwrap();
                assert!(r.ratio > 1.0);
                assert!(r.ratio >= witness_lower_bound(q, m), "q={q} m={m}");
                assert!(r.tail_relative < 1e-4);
            }
        }
    }

    #[test]
    fn tail_estimate_is_accurate() {
        // P(t) ~ P'(0) t near 0, so sum_{j>J} P(1/j)^2 ~ P'(0)^2 / J
        let w = build_witness(2, 7).unwrap();
        let h = 1e-7;
        let d = (w.eval(h) - w.eval(-h)) / (2.0 * h);
        let r = witness_ratio_detailed(2, 7).unwrap();
        let want = d * d / WITNESS_TRUNCATION as f64;
        assert!(((r.tail - want) / want).abs() < 1e-5);
    }

    #[test]
    fn deterministic() {
        let a = witness_ratio_detailed(3, 11).unwrap();
        let b = witness_ratio_detailed(3, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn needs_nondegenerate_interval() {
        assert!(matches!(
            witness_ratio(4, 5),
            Err(Error::DegenerateInterval { .. })
        ));
    }
}
