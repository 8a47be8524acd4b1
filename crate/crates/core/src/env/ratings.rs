use std::path::Path;

use super::LossTensor;
use crate::error::{Error, Result};

/// Losses are `(RATING_SCALE - r) / RATING_SCALE`.
pub const RATING_SCALE: f64 = 5.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingRow {
    pub agent: usize,
    pub arm: usize,
    pub rating: f64,
    pub timestamp: u64,
}

fn valid_rating(r: f64) -> bool {
    (0.5..=5.0).contains(&r) && (r * 2.0).fract() == 0.0
}

/// Parses `agent_id,arm_id,rating,timestamp` rows. Rows with a rating off the
/// half-star grid are dropped with a warning; timestamps must not decrease.
pub fn parse_ratings(text: &str, path: &Path) -> Result<Vec<RatingRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<RatingRow> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let err = |msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
        if rec.len() != 4 {
            return Err(err(format!("expected 4 fields, got {}", rec.len())));
        }
        let field = |i: usize| rec.get(i).unwrap_or("");
        let agent = field(0).parse().map_err(|_| err(format!("bad agent id `{}`", field(0))))?;
        let arm = field(1).parse().map_err(|_| err(format!("bad arm id `{}`", field(1))))?;
        let rating: f64 = field(2).parse().map_err(|_| err(format!("bad rating `{}`", field(2))))?;
        let timestamp: u64 = field(3).parse().map_err(|_| err(format!("bad timestamp `{}`", field(3))))?;
        if let Some(prev) = rows.last() {
            if timestamp < prev.timestamp {
                return Err(err(format!("timestamp {timestamp} precedes {}; rows must be sorted", prev.timestamp)));
            }
        }
        if !valid_rating(rating) {
            log::warn!("{}:{line}: rating {rating} not in {{0.5, 1, ..., 5}}, row skipped", path.display());
            continue;
        }
        rows.push(RatingRow { agent, arm, rating, timestamp });
    }
    Ok(rows)
}

/// Builds a piecewise-constant tensor: the `j`-th rating of agent `v` on arm
/// `i` (of `m` total) covers rounds `[(j-1) w, j w)` with `w = floor(T/m)`;
/// the last rating extends to the horizon. `horizon = None` uses the largest
/// per-(agent, arm) rating count. Rows for agents or arms outside the
/// requested ranges are ignored.
pub fn ratings_env(path: &Path, n_agents: usize, n_arms: usize, horizon: Option<usize>) -> Result<LossTensor> {
    let rows = parse_ratings(&std::fs::read_to_string(path)?, path)?;
    ratings_tensor(&rows, n_agents, n_arms, horizon)
}

pub(crate) fn ratings_tensor(rows: &[RatingRow], n: usize, k: usize, horizon: Option<usize>) -> Result<LossTensor> {
    let mut seqs: Vec<Vec<f64>> = vec![Vec::new(); n * k];
    for r in rows.iter().filter(|r| r.agent < n && r.arm < k) {
        seqs[r.agent * k + r.arm].push((RATING_SCALE - r.rating) / RATING_SCALE);
    }
    if let Some(pos) = seqs.iter().position(Vec::is_empty) {
        return Err(Error::invalid(format!("agent {} has no ratings for arm {}", pos / k, pos % k)));
    }
    let horizon = horizon.unwrap_or_else(|| seqs.iter().map(Vec::len).max().unwrap_or(0));
    if horizon == 0 {
        return Err(Error::invalid("ratings horizon must be positive"));
    }
    let mut values = vec![0.0; horizon * n * k];
    for (slot, seq) in seqs.iter().enumerate() {
        let width = (horizon / seq.len()).max(1);
        for t in 0..horizon {
            values[t * n * k + slot] = seq[(t / width).min(seq.len() - 1)];
        }
    }
    LossTensor::from_dense(horizon, n, k, values)
}
