use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SvgOptions {
    pub x: String,
    pub y: Vec<String>,
    /// Split rows into one series per distinct value of these columns.
    pub group_by: Vec<String>,
    pub log_y: bool,
    pub title: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOutput {
    pub svg: String,
    pub warnings: Vec<String>,
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn parse_cell(s: &str, line: usize, col: &str) -> Result<Option<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>().map(Some).map_err(|_| Error::Parse {
        line,
        msg: format!("column {col}: {s:?} is not a number"),
    })
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|f| f * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step).floor() as i64;
    (start..=end).map(|i| i as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.0e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Line chart of `y` columns against `x` from CSV text (`#` lines ignored).
pub fn emit_svg(csv_text: &str, opts: &SvgOptions) -> Result<SvgOutput> {
    if opts.y.is_empty() {
        return Err(Error::InvalidArgument("at least one y column is required".into()));
    }
    let mut warnings = Vec::new();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(csv_text.as_bytes());
    let headers: Vec<String> = match rdr.headers() {
        Ok(h) => h.iter().map(str::to_owned).collect(),
        Err(e) => return Err(Error::Csv(e)),
    };
    let mut series: BTreeMap<String, Series> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    if headers.iter().all(|h| h.is_empty()) {
        warnings.push("input has no header or rows; writing empty axes".into());
    } else {
        let find = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "column {name:?} not found (available: {})",
                    headers.join(", ")
                ))
            })
        };
        let xi = find(&opts.x)?;
        let yis = opts.y.iter().map(|c| find(c)).collect::<Result<Vec<_>>>()?;
        let gis = opts.group_by.iter().map(|c| find(c)).collect::<Result<Vec<_>>>()?;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map(|p| p.line() as usize).unwrap_or(0),
                msg: e.to_string(),
            })?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            let Some(x) = parse_cell(&rec[xi], line, &opts.x)? else {
                continue;
            };
            let group: Vec<String> = gis
                .iter()
                .zip(&opts.group_by)
                .map(|(&i, name)| format!("{name}={}", &rec[i]))
                .collect();
            for (&yi, yname) in yis.iter().zip(&opts.y) {
                let Some(y) = parse_cell(&rec[yi], line, yname)? else {
                    continue;
                };
                let mut label = yname.clone();
                if !group.is_empty() {
                    label = format!("{label} {}", group.join(" "));
                }
                if !series.contains_key(&label) {
                    order.push(label.clone());
                }
                series
                    .entry(label.clone())
                    .or_insert_with(|| Series {
                        label,
                        points: Vec::new(),
                    })
                    .points
                    .push((x, y));
            }
        }
        if series.is_empty() {
            warnings.push("input has no data rows; writing empty axes".into());
        }
    }

    // log axis: clamp non-positive values to the floor of the positive data
    let mut clamped = 0usize;
    let ys: Vec<f64> = series.values().flat_map(|s| s.points.iter().map(|p| p.1)).collect();
    if opts.log_y {
        let min_pos = ys.iter().copied().filter(|&y| y > 0.0).fold(f64::INFINITY, f64::min);
        let f = if min_pos.is_finite() { 10f64.powf(min_pos.log10().floor()) } else { 1e-16 };
        for s in series.values_mut() {
            for p in s.points.iter_mut() {
                if !(p.1 > 0.0) {
                    p.1 = f;
                    clamped += 1;
                }
            }
        }
        if clamped > 0 {
            warnings.push(format!("{clamped} non-positive value(s) clamped to the axis floor {f:e}"));
        }
    }
    let ty = |y: f64| if opts.log_y { y.log10() } else { y };

    let pts: Vec<(f64, f64)> = series
        .values()
        .flat_map(|s| s.points.iter().map(|&(x, y)| (x, ty(y))))
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = if pts.is_empty() {
        (0.0, 1.0, 0.0, 1.0)
    } else {
        pts.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
        )
    };
    if x1 <= x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    if opts.log_y {
        y0 = y0.floor();
        y1 = y1.ceil();
    }
    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + ph - (y - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if let Some(t) = &opts.title {
        let _ = writeln!(svg, r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{}</text>"#, MARGIN_L + pw / 2.0, escape(t));
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in nice_ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, MARGIN_T + ph, MARGIN_T + ph + 4.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN_T + ph + 16.0, fmt_tick(t));
    }
    let yticks: Vec<f64> = if opts.log_y {
        let step = ((y1 - y0) / 6.0).ceil().max(1.0);
        let mut v = Vec::new();
        let mut e = y0;
        while e <= y1 + 1e-9 {
            v.push(e);
            e += step;
        }
        v
    } else {
        nice_ticks(y0, y1)
    };
    for t in yticks {
        let y = sy(t);
        let label = if opts.log_y { format!("1e{}", t as i64) } else { fmt_tick(t) };
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_L}" y2="{y:.2}" stroke="black"/>"#, MARGIN_L - 4.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, MARGIN_L - 6.0, y + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN_L + pw / 2.0, HEIGHT - 12.0, escape(&opts.x));
    for (i, label) in order.iter().enumerate() {
        let s = &series[label];
        let color = COLORS[i % COLORS.len()];
        let mut d = String::new();
        for &(x, y) in &s.points {
            let (x, y) = (x, ty(y));
            if x.is_finite() && y.is_finite() {
                let _ = write!(d, "{}{:.2},{:.2}", if d.is_empty() { "" } else { " " }, sx(x), sy(y));
            }
        }
        let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{d}"/>"#);
        let ly = MARGIN_T + 12.0 + 16.0 * i as f64;
        let lx = MARGIN_L + pw + 10.0;
        let _ = writeln!(svg, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, lx + 18.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 22.0, ly + 4.0, escape(&s.label));
    }
    for (i, w) in warnings.iter().enumerate() {
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" fill="#b00" font-size="10">warning: {}</text>"##,
            MARGIN_L + 4.0,
            MARGIN_T + 14.0 + 12.0 * i as f64,
            escape(w)
        );
    }
    svg.push_str("</svg>\n");
    Ok(SvgOutput { svg, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(x: &str, y: &[&str]) -> SvgOptions {
        SvgOptions {
            x: x.into(),
            y: y.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    #[test]
    fn one_polyline_per_column() {
        let out = emit_svg("# meta\nm,err\n1,0.5\n2,0.25\n3,0.125\n", &opts("m", &["err"])).unwrap();
        assert_eq!(out.svg.matches("<polyline").count(), 1);
        assert!(out.warnings.is_empty());
        assert!(out.svg.starts_with("<svg") && out.svg.ends_with("</svg>\n"));
    }

    #[test]
    fn grouping_splits_series() {
        let csv = "method,T,m,n\nPLS,,1,1\nPLS,,2,1\nFE,2,1,1\nFE,2,2,2\nFE,4,1,1\n";
        let mut o = opts("m", &["n"]);
        o.group_by = vec!["method".into(), "T".into()];
        let out = emit_svg(csv, &o).unwrap();
        assert_eq!(out.svg.matches("<polyline").count(), 3);
    }

    #[test]
    fn log_axis_clamps_zero_with_warning() {
        let mut o = opts("m", &["err"]);
        o.log_y = true;
        let out = emit_svg("m,err\n1,1e-3\n2,0\n3,1e-5\n", &o).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert!(out.svg.contains("warning: 1 non-positive value(s) clamped"));
    }

    #[test]
    fn empty_input_gives_empty_axes() {
        let out = emit_svg("", &opts("m", &["err"])).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert_eq!(out.svg.matches("<polyline").count(), 0);
        let out = emit_svg("m,err\n", &opts("m", &["err"])).unwrap();
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn missing_column_is_named() {
        let e = emit_svg("m,err\n1,2\n", &opts("m", &["kappa"])).unwrap_err();
        assert!(e.to_string().contains("\"kappa\""), "{e}");
    }

    #[test]
    fn bad_number_reports_line() {
        let e = emit_svg("m,err\n1,2\n2,abc\n", &opts("m", &["err"])).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
    }

    #[test]
    fn deterministic() {
        let csv = "m,a,b\n1,3,4\n2,5,1\n";
        let a = emit_svg(csv, &opts("m", &["a", "b"])).unwrap();
        let b = emit_svg(csv, &opts("m", &["a", "b"])).unwrap();
        assert_eq!(a, b);
    }
}
