//! Static SVG line plots.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ini::Ini;

use crate::error::{Error, Result};

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_log: bool,
    pub y_log: bool,
    pub width: u32,
    pub height: u32,
    /// Extra CSVs drawn on top of the main one, in order.
    pub overlays: Vec<PathBuf>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            title: String::new(),
            x_label: "t".into(),
            y_label: "regret".into(),
            x_log: false,
            y_log: false,
            width: 640,
            height: 420,
            overlays: Vec::new(),
        }
    }
}

impl PlotSpec {
    /// `[plot]` section with keys title, x_label, y_label, x_scale, y_scale,
    /// width, height, overlay.
    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::config("<plot spec>", e.to_string()))?;
        let mut spec = PlotSpec::default();
        let Some(sec) = ini.section(Some("plot")) else {
            return Ok(spec);
        };
        for (k, v) in sec.iter() {
            let v = v.trim();
            let field = format!("plot.{k}");
            let scale = |v: &str| match v {
                "log" => Ok(true),
                "linear" => Ok(false),
                _ => Err(Error::config(field.clone(), format!("expected linear or log, got `{v}`"))),
            };
            let dim = |v: &str| v.parse::<u32>().ok().filter(|&d| d >= 100).ok_or_else(|| Error::config(field.clone(), "expected an integer >= 100"));
            match k {
                "title" => spec.title = v.into(),
                "x_label" => spec.x_label = v.into(),
                "y_label" => spec.y_label = v.into(),
                "x_scale" => spec.x_log = scale(v)?,
                "y_scale" => spec.y_log = scale(v)?,
                "width" => spec.width = dim(v)?,
                "height" => spec.height = dim(v)?,
                "overlay" => spec.overlays = v.split(',').map(|p| PathBuf::from(p.trim())).filter(|p| !p.as_os_str().is_empty()).collect(),
                _ => return Err(Error::config(field, "unknown key")),
            }
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Reads plottable series from a CSV: long form `series,x,value`, or wide
/// form with `x` first and one series per remaining column (`std` and
/// `count` skipped).
pub fn read_series(path: &Path) -> Result<Vec<Series>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let bad = |what: String| Error::Plot(format!("{}: {what}", path.display()));
    let num = |s: Option<&str>| -> Result<f64> {
        s.and_then(|v| v.trim().parse().ok()).ok_or_else(|| bad(format!("non-numeric field `{}`", s.unwrap_or(""))))
    };
    let mut out: Vec<Series> = Vec::new();
    if header == ["series", "x", "value"] {
        for rec in rdr.records() {
            let rec = rec?;
            let name = rec.get(0).unwrap_or("").to_string();
            let pt = (num(rec.get(1))?, num(rec.get(2))?);
            match out.iter_mut().find(|s| s.name == name) {
                Some(s) => s.points.push(pt),
                None => out.push(Series { name, points: vec![pt] }),
            }
        }
        return Ok(out);
    }
    if header.len() < 2 {
        return Err(bad("need at least two columns".into()));
    }
    let cols: Vec<usize> = (1..header.len()).filter(|&i| header[i] != "std" && header[i] != "count").collect();
    let stem_name = || {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("series");
        if stem == "aggregate" {
            path.parent().and_then(|p| p.file_name()).and_then(|s| s.to_str()).unwrap_or(stem).to_string()
        } else {
            stem.to_string()
        }
    };
    for &i in &cols {
        let name = if cols.len() == 1 && (header[i] == "mean" || header[i] == "value") { stem_name() } else { header[i].clone() };
        out.push(Series { name, points: Vec::new() });
    }
    for rec in rdr.records() {
        let rec = rec?;
        let x = num(rec.get(0))?;
        for (s, &i) in out.iter_mut().zip(&cols) {
            s.points.push((x, num(rec.get(i))?));
        }
    }
    Ok(out)
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn axis_map(log: bool, axis: &str) -> impl Fn(f64) -> Result<f64> + '_ {
    move |v: f64| {
        if !v.is_finite() {
            return Err(Error::Plot(format!("non-finite {axis} value")));
        }
        if log {
            if v <= 0.0 {
                return Err(Error::Plot(format!("log {axis} axis cannot show {v}")));
            }
            Ok(v.log10())
        } else {
            Ok(v)
        }
    }
}

fn ticks(lo: f64, hi: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let (a, b) = (lo.floor() as i32, hi.ceil() as i32);
        return (a..=b).map(f64::from).filter(|&e| e >= lo - 1e-9 && e <= hi + 1e-9).map(|e| (e, format!("1e{e}"))).collect();
    }
    (0..=4)
        .map(|i| {
            let v = lo + (hi - lo) * f64::from(i) / 4.0;
            (v, format!("{}", (v * 1000.0).round() / 1000.0))
        })
        .collect()
}

/// Deterministic SVG: same input, same bytes.
pub fn render_svg(series: &[Series], spec: &PlotSpec) -> Result<String> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(Error::Plot("empty series".into()));
    }
    let fx = axis_map(spec.x_log, "x");
    let fy = axis_map(spec.y_log, "y");
    let mut mapped = Vec::with_capacity(series.len());
    for s in series {
        let pts = s.points.iter().map(|&(x, y)| Ok((fx(x)?, fy(y)?))).collect::<Result<Vec<_>>>()?;
        mapped.push(pts);
    }
    let all = mapped.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let (left, right, top, bottom) = (70.0, 20.0, 40.0, 50.0);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, spec.width, spec.height, spec.width, spec.height);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if !spec.title.is_empty() {
        let _ = writeln!(s, r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, esc(&spec.title));
    }
    let _ = writeln!(
        s,
        r#"<path d="M{:.2} {:.2} V{:.2} H{:.2}" fill="none" stroke="black"/>"#,
        left,
        top,
        h - bottom,
        w - right
    );
    for (v, label) in ticks(x0, x1, spec.x_log) {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#, px(v), h - bottom + 16.0, label);
    }
    for (v, label) in ticks(y0, y1, spec.y_log) {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#, left - 6.0, py(v) + 4.0, label);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#, (left + w - right) / 2.0, h - 12.0, esc(&spec.x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (top + h - bottom) / 2.0,
        (top + h - bottom) / 2.0,
        esc(&spec.y_label)
    );
    for (i, pts) in mapped.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#, coords.join(" "));
    }
    for (i, ser) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let y = top + 8.0 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{colour}" stroke-width="2"/>"#, w - right - 150.0, w - right - 130.0);
        let _ = writeln!(s, r#"<text class="legend" x="{:.2}" y="{:.2}" font-size="11">{}</text>"#, w - right - 125.0, y + 4.0, esc(&ser.name));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Main CSV plus overlays rendered per `spec`.
pub fn plot(csv_path: &Path, spec: &PlotSpec) -> Result<String> {
    let mut series = read_series(csv_path)?;
    for o in &spec.overlays {
        series.extend(read_series(o)?);
    }
    render_svg(&series, spec)
}
