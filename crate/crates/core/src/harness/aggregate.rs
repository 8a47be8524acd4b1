//! Seed-wise mean and standard deviation of trace files.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::trace::{fmt_f64, RegretTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    /// `t,agent,regret,...`: network-average regret per checkpoint.
    Regret,
    /// `round,reward,regret,num_sets,event`: cumulative regret per round.
    Matching,
    /// `s,x,y`: regular-set count per super-epoch.
    Chain,
}

impl TraceKind {
    pub fn x_name(self) -> &'static str {
        match self {
            TraceKind::Regret => "t",
            TraceKind::Matching => "round",
            TraceKind::Chain => "s",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub x: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub kind: TraceKind,
    pub count: usize,
    pub rows: Vec<AggregateRow>,
}

impl Aggregate {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([self.kind.x_name(), "mean", "std", "count"])?;
        for r in &self.rows {
            w.write_record([r.x.to_string(), fmt_f64(r.mean), fmt_f64(r.std), self.count.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn final_mean(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.mean)
    }
}

/// One trace file as `(x, value)` points.
pub fn read_points(path: &Path) -> Result<(TraceKind, Vec<(usize, f64)>)> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    let schema = |msg: String| Error::Schema(format!("{}: {msg}", path.display()));
    match header.as_str() {
        "t,agent,regret,avg_regret" | "t,agent,regret,Q_running" => {
            let tr = RegretTrace::read_csv(path)?;
            let pts = (0..tr.checkpoints.len()).map(|c| (tr.checkpoints[c], tr.average(c))).collect();
            Ok((TraceKind::Regret, pts))
        }
        "round,reward,regret,num_sets,event" => {
            let mut cum = 0.0;
            let mut pts = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let round: usize = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(|| schema(format!("bad row {rec:?}")))?;
                let regret: f64 = rec.get(2).and_then(|s| s.parse().ok()).ok_or_else(|| schema(format!("bad row {rec:?}")))?;
                cum += regret;
                pts.push((round, cum));
            }
            Ok((TraceKind::Matching, pts))
        }
        "s,x,y" => {
            let mut pts = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let s: usize = rec.get(0).and_then(|v| v.parse().ok()).ok_or_else(|| schema(format!("bad row {rec:?}")))?;
                let x: f64 = rec.get(1).and_then(|v| v.parse().ok()).ok_or_else(|| schema(format!("bad row {rec:?}")))?;
                pts.push((s, x));
            }
            Ok((TraceKind::Chain, pts))
        }
        other => Err(schema(format!("unrecognised header `{other}`"))),
    }
}

/// Per-seed traces found in `dir` (`seed_*.csv`, sorted by name).
pub fn seed_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("seed_") && n.ends_with(".csv"))
        })
        .collect();
    files.sort();
    Ok(files)
}

pub fn aggregate(dir: &Path) -> Result<Aggregate> {
    let files = seed_files(dir)?;
    if files.is_empty() {
        return Err(Error::Schema(format!("{}: no seed_*.csv traces", dir.display())));
    }
    aggregate_files(&files)
}

/// Regret traces must share checkpoints; matching and chain traces of
/// different lengths are held at their last value.
pub fn aggregate_files(files: &[PathBuf]) -> Result<Aggregate> {
    let mut kind = None;
    let mut series = Vec::with_capacity(files.len());
    for f in files {
        let (k, pts) = read_points(f)?;
        if kind.is_some_and(|prev| prev != k) {
            return Err(Error::Schema(format!("{}: trace kind differs from earlier files", f.display())));
        }
        kind = Some(k);
        series.push(pts);
    }
    let kind = kind.ok_or_else(|| Error::Schema("no traces".into()))?;
    aggregate_points(kind, &series)
}

pub fn aggregate_points(kind: TraceKind, series: &[Vec<(usize, f64)>]) -> Result<Aggregate> {
    let count = series.len();
    let xs: Vec<usize> = if kind == TraceKind::Regret {
        let first: Vec<usize> = series[0].iter().map(|p| p.0).collect();
        for s in series {
            if s.len() != first.len() || s.iter().zip(&first).any(|(p, &x)| p.0 != x) {
                return Err(Error::Schema("regret traces have different checkpoints".into()));
            }
        }
        first
    } else {
        let mut all: Vec<usize> = series.iter().flat_map(|s| s.iter().map(|p| p.0)).collect();
        all.sort_unstable();
        all.dedup();
        all
    };
    let mut cursors = vec![0usize; count];
    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let vals: Vec<f64> = series
            .iter()
            .zip(cursors.iter_mut())
            .map(|(s, c)| {
                while *c + 1 < s.len() && s[*c + 1].0 <= x {
                    *c += 1;
                }
                s.get(*c).map_or(0.0, |p| p.1)
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / count as f64;
        let std = if count > 1 {
            (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        rows.push(AggregateRow { x, mean, std });
    }
    Ok(Aggregate { kind, count, rows })
}
