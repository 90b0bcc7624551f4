use thiserror::Error;

/// Errors raised by the numerical kernels, reconstruction maps and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("quadrature order {requested} exceeds the cap of {cap}")]
    QuadratureCap { requested: usize, cap: usize },

    #[error("zeta({0}) diverges; order must be at least 2")]
    DivergentZeta(u32),

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("quadrature did not converge for coefficient j = {j} (panel budget {budget} exhausted)")]
    QuadratureBudget { j: i64, budget: usize },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(
        "precision regime violated at (n, m) = ({n}, {m}): predicted bound {predicted:e} exceeds {cap:e} for {mode} arithmetic"
    )]
    PrecisionRegime {
        n: usize,
        m: usize,
        predicted: f64,
        cap: f64,
        mode: &'static str,
    },

    #[error("system is numerically singular (estimated condition number {kappa:e})")]
    IllConditioned { kappa: f64 },

    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("interval [{a}, {b}] is degenerate")]
    DegenerateInterval { a: f64, b: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by the numerical regime rather than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PrecisionRegime { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::QuadratureBudget { .. }
                | Error::Consistency(_)
                | Error::IllConditioned { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
