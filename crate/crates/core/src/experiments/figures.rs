use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{ExperimentConfig, Figure};
use super::VERSION;
use crate::conditioning::{select_max_n, CondMethod, Estimator, Selection, SelectionParams, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::fourier::TestFunction;
use crate::framebound::{b_star, bnm, log_b_star, proof_exponent_bound};
use crate::reconstruct::{fourier_extension, l2_error, poly_ls};

/// Upper limit on `n` for Fig. 1 when neither the precision cap nor the
/// configuration stops the grid earlier.
pub const FIG1_HARD_MAX_N: usize = 1000;

/// `# gibbslab <version> figure=<fig> seed=<seed> precision_mode=<mode>[ extra]`.
pub fn metadata_line(figure: Figure, cfg: &ExperimentConfig, extra: &str) -> String {
    let mut s = format!(
        "# gibbslab {VERSION} figure={figure} seed={} precision_mode={}",
        cfg.seed, cfg.precision_mode
    );
    if !extra.is_empty() {
        s.push(' ');
        s.push_str(extra);
    }
    s
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, fs::File)> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let f = fs::File::create(&path)?;
    Ok((path, f))
}

fn fmt_opt(t: Option<f64>) -> String {
    t.map(|t| t.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------- Fig. 1

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Row {
    pub n: usize,
    pub m: usize,
    pub b_value: f64,
    pub b_star: f64,
    /// `n^{beta-2} log B`.
    pub scaled_log_b: f64,
    /// `n^{beta-2} log B*`.
    pub scaled_log_b_star: f64,
    /// The bound with exponent `n^2/(8m)`.
    pub proof_bound: f64,
    pub b_ge_b_star: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Output {
    pub alpha: f64,
    pub beta: f64,
    pub rows: Vec<Fig1Row>,
}

impl Fig1Output {
    pub const CSV_HEADER: &'static str =
        "n,m,b_value,b_star,scaled_log_b,scaled_log_b_star,proof_bound,b_ge_b_star";

    pub fn violations(&self) -> Vec<&Fig1Row> {
        self.rows.iter().filter(|r| !r.b_ge_b_star).collect()
    }
}

fn fig1_m(alpha: f64, beta: f64, n: usize) -> usize {
    (alpha * (n as f64).powf(beta)).round() as usize
}

/// The Fig. 1 grid for one `(alpha, beta)`: every `n >= n_min` with
/// `m = round(alpha n^beta)`, up to the first `n` whose predicted bound exceeds
/// the precision cap. Rows with `n > 2m`, where `B` is infinite, are skipped.
fn fig1_grid(alpha: f64, beta: f64, cfg: &ExperimentConfig) -> Vec<(usize, usize)> {
    let cap = cfg.precision_mode.cap();
    let n_max = cfg.fig1_n_max.unwrap_or(FIG1_HARD_MAX_N).min(FIG1_HARD_MAX_N);
    let mut grid = Vec::new();
    for n in cfg.fig1_n_min.max(1)..=n_max {
        let m = fig1_m(alpha, beta, n);
        if n > 2 * m {
            continue;
        }
        if b_star(n, m) > cap {
            break;
        }
        grid.push((n, m));
    }
    grid
}

pub fn run_fig1(cfg: &ExperimentConfig) -> Result<Vec<Fig1Output>> {
    cfg.validate()?;
    cfg.alpha_beta
        .iter()
        .map(|&(alpha, beta)| {
            let grid = fig1_grid(alpha, beta, cfg);
            let rows = grid
                .par_iter()
                .map(|&(n, m)| {
                    let r = bnm(n, m, cfg.precision_mode)?;
                    let scale = (n as f64).powf(beta - 2.0);
                    Ok(Fig1Row {
                        n,
                        m,
                        b_value: r.b_value,
                        b_star: r.b_star,
                        scaled_log_b: scale * r.b_value.ln(),
                        scaled_log_b_star: scale * log_b_star(n, m),
                        proof_bound: proof_exponent_bound(n, m),
                        b_ge_b_star: r.b_value >= r.b_star,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Fig1Output { alpha, beta, rows })
        })
        .collect()
}

pub fn fig1_file_name(alpha: f64, beta: f64) -> String {
    format!("fig1_alpha{alpha}_beta{beta}.csv")
}

pub fn write_fig1(outputs: &[Fig1Output], cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for o in outputs {
        let (path, mut f) = create(dir, &fig1_file_name(o.alpha, o.beta))?;
        let extra = format!("alpha={} beta={} violations={}", o.alpha, o.beta, o.violations().len());
        writeln!(f, "{}", metadata_line(Figure::Fig1, cfg, &extra))?;
        writeln!(f, "{}", Fig1Output::CSV_HEADER)?;
        for r in &o.rows {
            writeln!(
                f,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.n, r.m, r.b_value, r.b_star, r.scaled_log_b, r.scaled_log_b_star, r.proof_bound, r.b_ge_b_star
            )?;
        }
        paths.push(path);
    }
    Ok(paths)
}

// ---------------------------------------------------------------- selection

fn selection_params(method: CondMethod, cfg: &ExperimentConfig) -> SelectionParams {
    let estimator = match method {
        CondMethod::Pls => Estimator::SigmaMinExact,
        CondMethod::Fe => Estimator::Randomized {
            trials: cfg.trials,
            seed: cfg.seed,
        },
    };
    SelectionParams {
        kappa0: cfg.kappa0,
        estimator,
        precision: cfg.precision_mode,
        window: DEFAULT_WINDOW,
        max_n: usize::MAX,
    }
}

/// Selected `n` for each `m` in order, each search starting from the previous answer.
pub fn selection_chain(
    method: CondMethod,
    t: Option<f64>,
    ms: &[usize],
    cfg: &ExperimentConfig,
) -> Result<Vec<(usize, Selection)>> {
    let params = selection_params(method, cfg);
    let mut start = 0;
    let mut out = Vec::with_capacity(ms.len());
    for &m in ms {
        let s = select_max_n(method, m, t, &params, start)?;
        start = s.n;
        out.push((m, s));
    }
    Ok(out)
}

fn chains(cfg: &ExperimentConfig) -> Vec<(CondMethod, Option<f64>)> {
    std::iter::once((CondMethod::Pls, None))
        .chain(cfg.t_values.iter().map(|&t| (CondMethod::Fe, Some(t))))
        .collect()
}

fn run_chains(
    cfg: &ExperimentConfig,
    ms: &[usize],
) -> Result<Vec<((CondMethod, Option<f64>), Vec<(usize, Selection)>)>> {
    chains(cfg)
        .into_par_iter()
        .map(|(method, t)| Ok(((method, t), selection_chain(method, t, ms, cfg)?)))
        .collect()
}

// ---------------------------------------------------------------- Fig. 2

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Row {
    pub method: CondMethod,
    pub t: Option<f64>,
    pub m: usize,
    pub n: usize,
    pub kappa: f64,
}

impl Fig2Row {
    pub fn n_over_sqrt_m(&self) -> f64 {
        self.n as f64 / (self.m as f64).sqrt()
    }

    pub fn n_over_m(&self) -> f64 {
        self.n as f64 / self.m as f64
    }
}

/// Count of adjacent evaluated `n` with `kappa(n + 1) < kappa(n)` per chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Audit {
    pub method: CondMethod,
    pub t: Option<f64>,
    pub non_monotone: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Output {
    pub rows: Vec<Fig2Row>,
    pub audit: Vec<Fig2Audit>,
}

impl Fig2Output {
    pub const CSV_HEADER: &'static str = "method,T,m,n,n_over_sqrt_m,n_over_m,kappa";
    pub const AUDIT_HEADER: &'static str = "method,T,non_monotone_pairs,evaluations";

    pub fn rows_for(&self, method: CondMethod, t: Option<f64>) -> Vec<&Fig2Row> {
        self.rows.iter().filter(|r| r.method == method && r.t == t).collect()
    }
}

pub fn run_fig2(cfg: &ExperimentConfig) -> Result<Fig2Output> {
    cfg.validate()?;
    let ms = cfg.fig2_m.strided(cfg.stride);
    let mut rows = Vec::new();
    let mut audit = Vec::new();
    for ((method, t), chain) in run_chains(cfg, &ms)? {
        audit.push(Fig2Audit {
            method,
            t,
            non_monotone: chain.iter().map(|(_, s)| s.non_monotone).sum(),
            evaluations: chain.iter().map(|(_, s)| s.evaluated.len()).sum(),
        });
        rows.extend(chain.into_iter().map(|(m, s)| Fig2Row {
            method,
            t,
            m,
            n: s.n,
            kappa: s.report.kappa,
        }));
    }
    Ok(Fig2Output { rows, audit })
}

pub fn write_fig2(out: &Fig2Output, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let extra = format!("kappa0={} trials={} stride={}", cfg.kappa0, cfg.trials, cfg.stride);
    let (p1, mut f) = create(dir, "fig2.csv")?;
    writeln!(f, "{}", metadata_line(Figure::Fig2, cfg, &extra))?;
    writeln!(f, "{}", Fig2Output::CSV_HEADER)?;
    for r in &out.rows {
        writeln!(
            f,
            "{},{},{},{},{:.16e},{:.16e},{:.16e}",
            r.method,
            fmt_opt(r.t),
            r.m,
            r.n,
            r.n_over_sqrt_m(),
            r.n_over_m(),
            r.kappa
        )?;
    }
    let (p2, mut f) = create(dir, "fig2_audit.csv")?;
    writeln!(f, "{}", metadata_line(Figure::Fig2, cfg, &extra))?;
    writeln!(f, "{}", Fig2Output::AUDIT_HEADER)?;
    for a in &out.audit {
        writeln!(f, "{},{},{},{}", a.method, fmt_opt(a.t), a.non_monotone, a.evaluations)?;
    }
    Ok(vec![p1, p2])
}

// ---------------------------------------------------------------- Fig. 3

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Row {
    pub m: usize,
    pub method: CondMethod,
    pub t: Option<f64>,
    pub n: usize,
    pub l2_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Output {
    pub function: TestFunction,
    pub rows: Vec<Fig3Row>,
}

impl Fig3Output {
    pub const CSV_HEADER: &'static str = "m,method,T,n,l2_error";

    pub fn error(&self, m: usize, method: CondMethod, t: Option<f64>) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.m == m && r.method == method && r.t == t)
            .map(|r| r.l2_error)
    }
}

pub fn run_fig3(cfg: &ExperimentConfig) -> Result<Vec<Fig3Output>> {
    cfg.validate()?;
    let ms = cfg.fig3_m.values();
    let chains = run_chains(cfg, &ms)?;
    cfg.functions
        .par_iter()
        .map(|&f| {
            let rows = ms
                .par_iter()
                .map(|&m| {
                    let c = f.coeffs_exact(m)?;
                    let mut rows = Vec::with_capacity(chains.len());
                    for ((method, t), chain) in &chains {
                        let n = chain
                            .iter()
                            .find(|(mm, _)| *mm == m)
                            .map(|(_, s)| s.n)
                            .ok_or_else(|| Error::Consistency(format!("no selection for m = {m}")))?;
                        let err = match method {
                            CondMethod::Pls => l2_error(&f, &poly_ls(&c, n)?.0)?,
                            CondMethod::Fe => {
                                let t = t.expect("extension chains carry T");
                                l2_error(&f, &fourier_extension(&c, n, t)?.0)?
                            }
                        };
                        rows.push(Fig3Row {
                            m,
                            method: *method,
                            t: *t,
                            n,
                            l2_error: err,
                        });
                    }
                    Ok(rows)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Fig3Output {
                function: f,
                rows: rows.into_iter().flatten().collect(),
            })
        })
        .collect()
}

pub fn fig3_file_name(f: &TestFunction) -> String {
    let p = format!("{:.4}", f.parameter());
    let p = p.trim_end_matches('0').trim_end_matches('.').replace('.', "p");
    format!("fig3_{}_{}.csv", f.family(), p)
}

pub fn write_fig3(outputs: &[Fig3Output], cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for o in outputs {
        let (path, mut f) = create(dir, &fig3_file_name(&o.function))?;
        let extra = format!(
            "function={} kappa0={} trials={}",
            o.function, cfg.kappa0, cfg.trials
        );
        writeln!(f, "{}", metadata_line(Figure::Fig3, cfg, &extra))?;
        writeln!(f, "{}", Fig3Output::CSV_HEADER)?;
        for r in &o.rows {
            writeln!(f, "{},{},{},{},{:.16e}", r.m, r.method, fmt_opt(r.t), r.n, r.l2_error)?;
        }
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::MRange;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig {
            fig1_n_max: Some(12),
            fig2_m: MRange { start: 1, end: 12, step: 1 },
            fig3_m: MRange { start: 10, end: 20, step: 10 },
            functions: vec![TestFunction::Runge(5.0), TestFunction::ExpLayer(1.0)],
            trials: 20,
            ..Default::default()
        }
    }

    #[test]
    fn fig1_grid_and_example_row() {
        let cfg = small_cfg();
        let out = run_fig1(&cfg).unwrap();
        assert_eq!(out.len(), 3);
        let first = &out[0];
        let row = first.rows.iter().find(|r| r.n == 4).unwrap();
        assert_eq!(row.m, 2);
        // sqrt(1 + 4/16 + (4/32)(9/4)^8)
        let want = (1.0 + 4.0 / 16.0 + (4.0 / 32.0) * 2.25f64.powi(8)).sqrt();
        assert!((row.b_star - want).abs() <= 1e-12 * want);
        for o in &out {
            for r in &o.rows {
                assert!(r.n <= 2 * r.m && r.n <= 12);
                assert!(r.b_value >= r.proof_bound * (1.0 - 1e-9), "n={} m={}", r.n, r.m);
            }
        }
    }

    #[test]
    fn fig1_stops_at_precision_cap() {
        let cfg = ExperimentConfig::default();
        for &(a, b) in &cfg.alpha_beta {
            let g = fig1_grid(a, b, &cfg);
            let &(n, _) = g.last().unwrap();
            assert!(n < FIG1_HARD_MAX_N);
            let next_m = fig1_m(a, b, n + 1);
            assert!(b_star(n + 1, next_m) > cfg.precision_mode.cap() || n + 1 > 2 * next_m);
        }
    }

    #[test]
    fn fig2_small_grid() {
        let out = run_fig2(&small_cfg()).unwrap();
        let pls = out.rows_for(CondMethod::Pls, None);
        assert_eq!(pls.len(), 12);
        assert!(pls.iter().all(|r| r.kappa <= 10.0 && r.n <= r.m));
        for t in [1.5, 2.0, 4.0] {
            assert_eq!(out.rows_for(CondMethod::Fe, Some(t)).len(), 12);
        }
        assert_eq!(out.audit.len(), 4);
    }

    #[test]
    fn outputs_are_reproducible() {
        let cfg = small_cfg();
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a");
        let b = dir.path().join("b");
        write_fig2(&run_fig2(&cfg).unwrap(), &cfg, &a).unwrap();
        write_fig2(&run_fig2(&cfg).unwrap(), &cfg, &b).unwrap();
        let fa = fs::read(a.join("fig2.csv")).unwrap();
        assert_eq!(fa, fs::read(b.join("fig2.csv")).unwrap());
        let text = String::from_utf8(fa).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("# gibbslab ") && first.contains("seed=1") && first.contains("precision_mode=double"));
        assert_eq!(text.lines().nth(1).unwrap(), Fig2Output::CSV_HEADER);
    }

    #[test]
    fn fig3_small_grid() {
        let cfg = small_cfg();
        let out = run_fig3(&cfg).unwrap();
        assert_eq!(out.len(), 2);
        for o in &out {
            assert_eq!(o.rows.len(), 2 * 4);
            assert!(o.rows.iter().all(|r| r.l2_error.is_finite() && r.l2_error >= 0.0));
        }
        let dir = tempfile::tempdir().unwrap();
        let paths = write_fig3(&out, &cfg, dir.path()).unwrap();
        assert!(paths[0].ends_with("fig3_runge_5.csv"));
    }

    #[test]
    fn fig3_file_names() {
        assert_eq!(fig3_file_name(&TestFunction::RealPole(49.0)), "fig3_realpole_49.csv");
        assert_eq!(
            fig3_file_name(&TestFunction::Cosine(7.0 * std::f64::consts::SQRT_2)),
            "fig3_cosine_9p8995.csv"
        );
    }
}
