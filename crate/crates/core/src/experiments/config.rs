use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::TestFunction;
use crate::framebound::PrecisionMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        })
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            _ => Err(Error::InvalidArgument(format!("unknown figure {s:?}"))),
        }
    }
}

/// `start, start + step, ..., <= end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl MRange {
    pub fn values(&self) -> Vec<usize> {
        if self.step == 0 || self.start > self.end {
            return Vec::new();
        }
        (self.start..=self.end).step_by(self.step).collect()
    }

    /// Every `stride`-th value, keeping the last one.
    pub fn strided(&self, stride: usize) -> Vec<usize> {
        let v = self.values();
        let stride = stride.max(1);
        let mut out: Vec<usize> = v.iter().copied().skip(stride - 1).step_by(stride).collect();
        if let Some(&last) = v.last() {
            if out.last() != Some(&last) {
                out.push(last);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub figure: Figure,
    /// Pairs `(alpha, beta)` with `m = round(alpha n^beta)`.
    pub alpha_beta: Vec<(f64, f64)>,
    pub fig1_n_min: usize,
    /// Further cap on `n`; the precision regime always applies.
    pub fig1_n_max: Option<usize>,
    pub fig2_m: MRange,
    pub fig3_m: MRange,
    pub functions: Vec<TestFunction>,
    pub t_values: Vec<f64>,
    pub kappa0: f64,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub precision_mode: PrecisionMode,
    /// Use every `stride`-th value of the Fig. 2 grid.
    pub stride: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            figure: Figure::Fig1,
            alpha_beta: vec![(0.5, 1.0), (0.25, 1.25), (0.125, 1.5)],
            fig1_n_min: 1,
            fig1_n_max: None,
            fig2_m: MRange { start: 1, end: 200, step: 1 },
            fig3_m: MRange { start: 10, end: 200, step: 10 },
            functions: TestFunction::comparison_set().to_vec(),
            t_values: vec![1.5, 2.0, 4.0],
            kappa0: 10.0,
            trials: 100,
            seed: 1,
            out_dir: PathBuf::from("out"),
            precision_mode: PrecisionMode::Double,
            stride: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn for_figure(figure: Figure) -> Self {
        ExperimentConfig {
            figure,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.kappa0 > 1.0) {
            return bad(format!("kappa0 must exceed 1, got {}", self.kappa0));
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.stride == 0 {
            return bad("stride must be positive".into());
        }
        if let Some(&t) = self.t_values.iter().find(|&&t| !(t > 1.0 && t.is_finite())) {
            return bad(format!("extension half-length must exceed 1, got {t}"));
        }
        if let Some(&(a, b)) = self
            .alpha_beta
            .iter()
            .find(|(a, b)| !(*a > 0.0 && a.is_finite() && b.is_finite()))
        {
            return bad(format!("invalid (alpha, beta) = ({a}, {b})"));
        }
        for r in [self.fig2_m, self.fig3_m] {
            if r.step == 0 || r.start > r.end {
                return bad(format!("invalid m range {}..={} step {}", r.start, r.end, r.step));
            }
        }
        for f in &self.functions {
            f.validate()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
