use rand::Rng;

use super::CommGraph;
use crate::error::{Error, Result};
use crate::rng;

/// Maximum number of resamples for random topologies before giving up.
pub const MAX_RESAMPLES: usize = 1000;

/// Topology family with its family-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    Complete { n: usize },
    /// Circulant: each node linked to `r/2` successors and predecessors on a
    /// ring; odd `r` (even `n` only) adds the antipodal chord.
    RRegular { n: usize, r: usize },
    /// Node 0 is the hub.
    Star { n: usize },
    Grid { rows: usize, cols: usize },
    /// `p = None` uses `2 ln(n) / n`.
    ErdosRenyi { n: usize, p: Option<f64> },
    /// Random geometric graph on the unit square.
    Rgg { n: usize, radius: f64 },
}

impl Topology {
    pub fn n_agents(&self) -> usize {
        match *self {
            Topology::Complete { n }
            | Topology::RRegular { n, .. }
            | Topology::Star { n }
            | Topology::ErdosRenyi { n, .. }
            | Topology::Rgg { n, .. } => n,
            Topology::Grid { rows, cols } => rows * cols,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Topology::Complete { n } => format!("complete-{n}"),
            Topology::RRegular { n, r } => format!("regular-{n}-r{r}"),
            Topology::Star { n } => format!("star-{n}"),
            Topology::Grid { rows, cols } => format!("grid-{rows}x{cols}"),
            Topology::ErdosRenyi { n, .. } => format!("er-{n}"),
            Topology::Rgg { n, radius } => format!("rgg-{n}-{radius}"),
        }
    }
}

/// Builds a connected simple graph; deterministic for a fixed seed.
pub fn build_topology(kind: &Topology, delay: usize, seed: u64) -> Result<CommGraph> {
    let g = match *kind {
        Topology::Complete { n } => {
            let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            CommGraph::from_edges(n, edges, delay)?
        }
        Topology::RRegular { n, r } => circulant(n, r, delay)?,
        Topology::Star { n } => {
            if n < 2 {
                return Err(Error::Construction("star needs at least 2 agents".into()));
            }
            CommGraph::from_edges(n, (1..n).map(|v| (0, v)), delay)?
        }
        Topology::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(Error::Construction("grid dimensions must be positive".into()));
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            CommGraph::from_edges(rows * cols, edges, delay)?
        }
        Topology::ErdosRenyi { n, p } => {
            if n < 2 {
                return Err(Error::Construction("Erdős–Rényi needs at least 2 agents".into()));
            }
            let p = p.unwrap_or(2.0 * (n as f64).ln() / n as f64).min(1.0);
            if !(p > 0.0) {
                return Err(Error::Construction(format!("edge probability {p} not in (0,1]")));
            }
            resample_until_connected(seed, |rng| {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.random::<f64>() < p {
                            edges.push((u, v));
                        }
                    }
                }
                CommGraph::from_edges(n, edges, delay)
            })?
        }
        Topology::Rgg { n, radius } => {
            if !(radius > 0.0 && radius <= std::f64::consts::SQRT_2) {
                return Err(Error::Construction(format!("rgg radius {radius} not in (0, √2]")));
            }
            resample_until_connected(seed, |rng| {
                let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        let (dx, dy) = (pts[u].0 - pts[v].0, pts[u].1 - pts[v].1);
                        if (dx * dx + dy * dy).sqrt() <= radius {
                            edges.push((u, v));
                        }
                    }
                }
                CommGraph::from_edges(n, edges, delay)
            })?
        }
    };
    if !g.is_connected() {
        return Err(Error::Construction(format!("{} is disconnected", kind.label())));
    }
    Ok(g)
}

fn circulant(n: usize, r: usize, delay: usize) -> Result<CommGraph> {
    if r == 0 || r >= n {
        return Err(Error::Construction(format!("regular degree {r} infeasible for {n} agents")));
    }
    if r % 2 == 1 && n % 2 == 1 {
        return Err(Error::Construction(format!("odd degree {r} needs an even number of agents, got {n}")));
    }
    let mut edges = std::collections::BTreeSet::new();
    for u in 0..n {
        for j in 1..=r / 2 {
            let v = (u + j) % n;
            edges.insert((u.min(v), u.max(v)));
        }
        if r % 2 == 1 {
            let v = (u + n / 2) % n;
            edges.insert((u.min(v), u.max(v)));
        }
    }
    CommGraph::from_edges(n, edges, delay)
}

fn resample_until_connected<F>(seed: u64, mut sample: F) -> Result<CommGraph>
where
    F: FnMut(&mut rng::SimRng) -> Result<CommGraph>,
{
    let mut rng = rng::seeded(seed);
    for _ in 0..MAX_RESAMPLES {
        let g = sample(&mut rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Construction(format!("no connected sample after {MAX_RESAMPLES} attempts")))
}
