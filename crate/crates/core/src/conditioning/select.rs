use serde::{Deserialize, Serialize};

use super::{kappa, CondMethod, ConditionReport, Estimator};
use crate::error::{Error, Result};
use crate::framebound::PrecisionMode;

/// Candidates examined beyond the current `n` before the ascent stops.
pub const DEFAULT_WINDOW: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionParams {
    pub kappa0: f64,
    pub estimator: Estimator,
    pub precision: PrecisionMode,
    pub window: usize,
    /// Largest `n` considered. Both methods are also capped at `m`.
    pub max_n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub n: usize,
    /// The report at the selected `n`.
    pub report: ConditionReport,
    /// Every evaluation made, in order.
    pub evaluated: Vec<ConditionReport>,
    /// Pairs `(n, n + 1)` seen with `kappa(n + 1) < kappa(n)`.
    pub non_monotone: usize,
}

/// Largest `n <= m` with `kappa(method, n, m, t) <= kappa0`.
///
/// Starts at `start` (typically the answer for the previous `m`), steps down
/// while it does not conform, then climbs: the next `window` values are
/// examined and the largest conforming one becomes the new position. The
/// climb stops when none of them conforms. `n = 0` always conforms.
///
/// A precision-regime failure counts as not conforming, since it means the
/// predicted condition number is far beyond any useful `kappa0`.
pub fn select_max_n(
    method: CondMethod,
    m: usize,
    t: Option<f64>,
    params: &SelectionParams,
    start: usize,
) -> Result<Selection> {
    if !(params.kappa0 > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "kappa0 must exceed 1, got {}",
            params.kappa0
        )));
    }
    if params.window == 0 {
        return Err(Error::InvalidArgument("scan window must be positive".into()));
    }
    // Past n = m the extension system is underdetermined and its minimum-norm
    // solution is well conditioned again, so the rule only makes sense below.
    let cap = params.max_n.min(m);
    let mut evaluated: Vec<ConditionReport> = Vec::new();
    let mut eval = |n: usize| -> Result<Option<ConditionReport>> {
        if let Some(r) = evaluated.iter().find(|r| r.n == n) {
            return Ok(Some(r.clone()));
        }
        match kappa(method, n, m, t, params.estimator, params.precision) {
            Ok(r) => {
                evaluated.push(r.clone());
                Ok(Some(r))
            }
            Err(Error::PrecisionRegime { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let conforms = |r: &Option<ConditionReport>| r.as_ref().is_some_and(|r| r.kappa <= params.kappa0);

    let mut n = start.min(cap);
    let mut current = eval(n)?;
    while n > 0 && !conforms(&current) {
        n -= 1;
        current = eval(n)?;
    }
    let mut current = match current {
        Some(r) if r.kappa <= params.kappa0 || n == 0 => r,
        _ => unreachable!("n = 0 is evaluated before giving up"),
    };
    loop {
        let mut next = None;
        for k in n + 1..=(n + params.window).min(cap) {
            let r = eval(k)?;
            if conforms(&r) {
                next = r.map(|r| (k, r));
            }
        }
        match next {
            Some((k, r)) => {
                n = k;
                current = r;
            }
            None => break,
        }
    }
    let mut sorted: Vec<&ConditionReport> = evaluated.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let non_monotone = sorted
        .windows(2)
        .filter(|w| w[1].n == w[0].n + 1 && w[1].kappa < w[0].kappa)
        .count();
    Ok(Selection {
        n,
        report: current,
        evaluated,
        non_monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditioning::kappa_pls;

    fn pls_params() -> SelectionParams {
        SelectionParams {
            kappa0: 10.0,
            estimator: Estimator::SigmaMinExact,
            precision: PrecisionMode::Double,
            window: DEFAULT_WINDOW,
            max_n: usize::MAX,
        }
    }

    #[test]
    fn pls_selection_is_maximal() {
        for m in [1, 5, 20, 60] {
            for start in [0, 3, 50] {
                let s = select_max_n(CondMethod::Pls, m, None, &pls_params(), start).unwrap();
                assert!(s.report.kappa <= 10.0);
                if s.n < m {
                    let above = kappa_pls(s.n + 1, m, PrecisionMode::Double).map(|r| r.kappa);
                    assert!(above.map_or(true, |k| k > 10.0), "m={m} n={}", s.n);
                }
            }
        }
    }

    #[test]
    fn start_does_not_change_answer() {
        let a = select_max_n(CondMethod::Pls, 40, None, &pls_params(), 0).unwrap();
        let b = select_max_n(CondMethod::Pls, 40, None, &pls_params(), 30).unwrap();
        assert_eq!(a.n, b.n);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = pls_params();
        p.kappa0 = 1.0;
        assert!(select_max_n(CondMethod::Pls, 4, None, &p, 0).is_err());
        let mut p = pls_params();
        p.window = 0;
        assert!(select_max_n(CondMethod::Pls, 4, None, &p, 0).is_err());
    }

    #[test]
    fn cap_is_respected() {
        let mut p = pls_params();
        p.kappa0 = 1e6;
        p.max_n = 2;
        let s = select_max_n(CondMethod::Pls, 30, None, &p, 0).unwrap();
        assert_eq!(s.n, 2);
    }

    #[test]
    fn fe_selection_conforms() {
        let p = SelectionParams {
            kappa0: 10.0,
            estimator: Estimator::Randomized { trials: 100, seed: 3 },
            precision: PrecisionMode::Double,
            window: DEFAULT_WINDOW,
            max_n: 200,
        };
        let s = select_max_n(CondMethod::Fe, 20, Some(2.0), &p, 0).unwrap();
        assert!(s.report.kappa <= 10.0);
        assert!(s.n > 0);
    }
}
