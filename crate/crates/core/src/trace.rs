//! Per-agent regret traces and their CSV form.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Regret of every agent at increasing checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub checkpoints: Vec<usize>,
    /// `regret[c][v]`: regret of agent `v` at `checkpoints[c]`.
    pub regret: Vec<Vec<f64>>,
    /// Running message count per checkpoint, for communication-metered runs.
    pub messages: Option<Vec<u64>>,
}

impl RegretTrace {
    pub fn new(with_messages: bool) -> Self {
        RegretTrace { checkpoints: Vec::new(), regret: Vec::new(), messages: with_messages.then(Vec::new) }
    }

    pub fn push(&mut self, t: usize, per_agent: Vec<f64>) {
        debug_assert!(self.checkpoints.last().is_none_or(|&last| last < t));
        self.checkpoints.push(t);
        self.regret.push(per_agent);
    }

    pub fn push_metered(&mut self, t: usize, per_agent: Vec<f64>, q: u64) {
        self.push(t, per_agent);
        self.messages.get_or_insert_with(Vec::new).push(q);
    }

    pub fn average(&self, c: usize) -> f64 {
        let r = &self.regret[c];
        r.iter().sum::<f64>() / r.len() as f64
    }

    pub fn final_average(&self) -> f64 {
        self.checkpoints.len().checked_sub(1).map_or(0.0, |c| self.average(c))
    }

    pub fn final_regret(&self) -> &[f64] {
        self.regret.last().map_or(&[], Vec::as_slice)
    }

    /// Average regret at checkpoint `t`, if recorded.
    pub fn average_at(&self, t: usize) -> Option<f64> {
        self.checkpoints.binary_search(&t).ok().map(|c| self.average(c))
    }

    pub fn header(&self) -> &'static str {
        if self.messages.is_some() {
            "t,agent,regret,Q_running"
        } else {
            "t,agent,regret,avg_regret"
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header().split(','))?;
        for (c, &t) in self.checkpoints.iter().enumerate() {
            let last = match &self.messages {
                Some(q) => q[c].to_string(),
                None => fmt_f64(self.average(c)),
            };
            for (v, r) in self.regret[c].iter().enumerate() {
                w.write_record([t.to_string(), v.to_string(), fmt_f64(*r), last.clone()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv(path: &Path) -> Result<RegretTrace> {
        let mut rdr = csv::Reader::from_path(path)?;
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        let metered = match header.join(",").as_str() {
            "t,agent,regret,avg_regret" => false,
            "t,agent,regret,Q_running" => true,
            other => return Err(Error::Schema(format!("{}: unexpected header `{other}`", path.display()))),
        };
        let mut trace = RegretTrace::new(metered);
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Schema(format!("{}: bad field {i} in {:?}", path.display(), rec)))
            };
            let (t, v, r) = (parse(0)? as usize, parse(1)? as usize, parse(2)?);
            if trace.checkpoints.last() != Some(&t) {
                if trace.checkpoints.last().is_some_and(|&l| l > t) {
                    return Err(Error::Schema(format!("{}: checkpoints not increasing", path.display())));
                }
                trace.checkpoints.push(t);
                trace.regret.push(Vec::new());
                if let Some(q) = trace.messages.as_mut() {
                    q.push(parse(3)? as u64);
                }
            }
            let row = trace.regret.last_mut().expect("pushed above");
            if row.len() != v {
                return Err(Error::Schema(format!("{}: agent ids out of order at t={t}", path.display())));
            }
            row.push(r);
        }
        Ok(trace)
    }
}

/// Running realised regret of several agents against their best fixed arm.
#[derive(Debug, Clone)]
pub struct RegretMeter {
    incurred: Vec<f64>,
    cum: Vec<Vec<f64>>,
}

impl RegretMeter {
    pub fn new(n_agents: usize, n_arms: usize) -> Self {
        RegretMeter { incurred: vec![0.0; n_agents], cum: vec![vec![0.0; n_arms]; n_agents] }
    }

    /// Agent `v` played `arm` against the loss vector `losses`.
    pub fn record(&mut self, v: usize, arm: usize, losses: &[f64]) {
        self.incurred[v] += losses[arm];
        for (c, l) in self.cum[v].iter_mut().zip(losses) {
            *c += l;
        }
    }

    pub fn regret(&self, v: usize) -> f64 {
        self.incurred[v] - self.cum[v].iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn all(&self) -> Vec<f64> {
        (0..self.incurred.len()).map(|v| self.regret(v)).collect()
    }
}

/// Shortest round-trip decimal form.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Checkpoints `stride, 2 stride, ...` plus the horizon.
pub fn is_checkpoint(t: usize, stride: usize, horizon: usize) -> bool {
    t == horizon || (stride > 0 && t.is_multiple_of(stride))
}
