use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;

use gibbslab::experiments::{
    emit_svg, run_fig1, run_fig2, run_fig3, write_fig1, write_fig2, write_fig3, ExperimentConfig, Figure,
    SvgOptions, VERSION,
};
use gibbslab::fourier::{CoeffVec, TestFunction};
use gibbslab::framebound::{bnm, BnmReport, PrecisionMode};
use gibbslab::polyspace::legendre_fourier_matrix;
use gibbslab::reconstruct::{l2_error, Basis, ExtensionFn, Method, Reconstruction};
use gibbslab::{Complex64, Error, Result};

/// Reconstruction from Fourier coefficients: stability constants, condition
/// numbers and the figure experiments.
#[derive(Parser, Debug)]
#[command(name = "gibbslab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Half-width m (bnm, recover); last m of the grid (fig2, fig3).
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Degree n (bnm), half-degree or extension degree (recover), largest n (fig1).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Extension half-length(s), comma separated.
    #[arg(long = "T", global = true, value_delimiter = ',')]
    t: Vec<f64>,
    #[arg(long, global = true)]
    kappa0: Option<f64>,
    /// Random trials of the extension condition estimate.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON experiment configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Arithmetic for B_{n,m}: double or dd.
    #[arg(long, global = true)]
    precision: Option<PrecisionMode>,
    /// Use every stride-th m of the Fig. 2 grid.
    #[arg(long, global = true)]
    stride: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// B_{n,m} against the predicted bound along m = round(alpha n^beta).
    Fig1,
    /// Largest n with condition number at most kappa0, for each m.
    Fig2,
    /// L2 errors of least squares and Fourier extensions for the eight test functions.
    Fig3,
    /// Reconstruct from a coefficient file or a named test function.
    Recover(RecoverArgs),
    /// B_{n,m} for one (n, m).
    Bnm,
    /// Line chart of CSV columns as SVG.
    EmitSvg(SvgArgs),
}

#[derive(Args, Debug)]
struct RecoverArgs {
    /// CSV with columns j,re,im.
    #[arg(long, conflicts_with = "function")]
    coeffs: Option<PathBuf>,
    /// Test function such as runge:5 or cosine:7sqrt2.
    #[arg(long)]
    function: Option<String>,
    /// iprm, pls or fe.
    #[arg(long, default_value = "pls")]
    method: String,
}

#[derive(Args, Debug)]
struct SvgArgs {
    /// Input CSV file.
    input: PathBuf,
    #[arg(long)]
    x: String,
    /// Columns to plot, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    y: Vec<String>,
    /// Columns whose values split rows into series.
    #[arg(long, value_delimiter = ',')]
    group_by: Vec<String>,
    #[arg(long)]
    log_y: bool,
    /// Output file; defaults to the input with an .svg extension inside --out.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn config(common: &Common, figure: Figure) -> Result<ExperimentConfig> {
    let mut c = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    c.figure = figure;
    if let Some(m) = common.m {
        c.fig2_m.end = m;
        c.fig3_m.end = m;
    }
    if let Some(n) = common.n {
        c.fig1_n_max = Some(n);
    }
    if !common.t.is_empty() {
        c.t_values = common.t.clone();
    }
    if let Some(k) = common.kappa0 {
        c.kappa0 = k;
    }
    if let Some(t) = common.trials {
        c.trials = t;
    }
    if let Some(s) = common.seed {
        c.seed = s;
    }
    if let Some(o) = &common.out {
        c.out_dir = o.clone();
    }
    if let Some(p) = common.precision {
        c.precision_mode = p;
    }
    if let Some(s) = common.stride {
        c.stride = s;
    }
    c.validate()?;
    Ok(c)
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required")))
}

/// Fourier coefficients `|j| <= m` of a reconstruction.
fn reconstruction_coeffs(r: &Reconstruction, m: usize) -> Result<CoeffVec> {
    match r.basis {
        Basis::Legendre => {
            let a = legendre_fourier_matrix(r.coefficients.len() - 1, m)?;
            let v = a * DVector::from_column_slice(&r.coefficients);
            CoeffVec::new(m, v.as_slice().to_vec())
        }
        Basis::ExtensionFourier => {
            let t = require(r.parameters.t, "T")?;
            ExtensionFn::new(t, r.parameters.n, r.coefficients.clone())?.fourier_coeffs(m)
        }
    }
}

fn recover(common: &Common, args: &RecoverArgs) -> Result<()> {
    let method: Method = args.method.parse()?;
    let function: Option<TestFunction> = args.function.as_deref().map(str::parse).transpose()?;
    let c = match (&args.coeffs, function) {
        (Some(p), _) => {
            let c = CoeffVec::read_csv(fs::File::open(p)?)?;
            match common.m {
                Some(m) => c.truncate(m)?,
                None => c,
            }
        }
        (None, Some(f)) => f.coeffs_exact(require(common.m, "m")?)?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "recover needs --coeffs FILE or --function SPEC".into(),
            ))
        }
    };
    let n = match method {
        Method::Iprm => c.m(),
        _ => require(common.n, "n")?,
    };
    let t = common.t.first().copied();
    let r = Reconstruction::compute(method, &c, n, t)?;
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir)?;

    let json = dir.join("recover.json");
    fs::write(&json, r.to_json()? + "\n")?;

    let samples = dir.join("recover_samples.csv");
    let mut w = std::io::BufWriter::new(fs::File::create(&samples)?);
    writeln!(w, "# gibbslab {VERSION} recover method={method} m={} n={n}", c.m())?;
    match function {
        Some(_) => writeln!(w, "x,re,im,f")?,
        None => writeln!(w, "x,re,im")?,
    }
    for i in 0..1001 {
        let x = if i == 1000 { 1.0 } else { -1.0 + i as f64 * 0.002 };
        let v: Complex64 = r.eval(x);
        match function {
            Some(f) => writeln!(w, "{x:.6},{:.16e},{:.16e},{:.16e}", v.re, v.im, f.eval(x))?,
            None => writeln!(w, "{x:.6},{:.16e},{:.16e}", v.re, v.im)?,
        }
    }
    w.flush()?;

    let coeffs = dir.join("recover_coeffs.csv");
    reconstruction_coeffs(&r, c.m())?.write_csv(
        fs::File::create(&coeffs)?,
        Some(&format!("Fourier coefficients of the {method} reconstruction")),
    )?;
    report(&[json, samples, coeffs]);
    println!(
        "rank_used={} residual_norm={:e}",
        r.parameters.rank_used, r.parameters.residual_norm
    );
    if let Some(f) = function {
        println!("l2_error={:.6e}", l2_error(&f, &r)?);
    }
    Ok(())
}

fn bnm_cmd(common: &Common) -> Result<()> {
    let n = require(common.n, "n")?;
    let m = require(common.m, "m")?;
    let r = bnm(n, m, common.precision.unwrap_or_default())?;
    let comment = format!("gibbslab {VERSION}");
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let p = dir.join("bnm.csv");
            BnmReport::write_csv(&[r], fs::File::create(&p)?, Some(&comment))?;
            report(&[p]);
        }
        None => BnmReport::write_csv(&[r], std::io::stdout().lock(), Some(&comment))?,
    }
    Ok(())
}

fn svg_cmd(common: &Common, args: &SvgArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)?;
    let opts = SvgOptions {
        x: args.x.clone(),
        y: args.y.clone(),
        group_by: args.group_by.clone(),
        log_y: args.log_y,
        title: args.input.file_stem().map(|s| s.to_string_lossy().into_owned()),
    };
    let out = emit_svg(&text, &opts)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let path = match &args.output {
        Some(p) => p.clone(),
        None => {
            let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            dir.join(Path::new(args.input.file_name().unwrap_or_default()).with_extension("svg"))
        }
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&path, out.svg)?;
    report(&[path]);
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let common = &cli.common;
    match &cli.command {
        Command::Fig1 => {
            let c = config(common, Figure::Fig1)?;
            let out = run_fig1(&c)?;
            let paths = write_fig1(&out, &c, &c.out_dir)?;
            report(&paths);
            for o in &out {
                let v = o.violations().len();
                if v > 0 {
                    eprintln!(
                        "note: alpha={} beta={}: B < B* on {v} of {} rows",
                        o.alpha,
                        o.beta,
                        o.rows.len()
                    );
                }
            }
        }
        Command::Fig2 => {
            let c = config(common, Figure::Fig2)?;
            report(&write_fig2(&run_fig2(&c)?, &c, &c.out_dir)?);
        }
        Command::Fig3 => {
            let c = config(common, Figure::Fig3)?;
            report(&write_fig3(&run_fig3(&c)?, &c, &c.out_dir)?);
        }
        Command::Recover(args) => recover(common, args)?,
        Command::Bnm => bnm_cmd(common)?,
        Command::EmitSvg(args) => svg_cmd(common, args)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
