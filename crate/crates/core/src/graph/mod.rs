//! Communication topologies and the machinery built on them: spectra,
//! gossip matrices, independence numbers, center selection and the delayed
//! message bus.

mod builders;
mod centers;
mod gossip;
mod inbox;
mod independence;
mod io;
mod spectral;

use std::collections::{BTreeSet, VecDeque};

pub use builders::{build_topology, Topology};
pub use centers::{select_centers, select_centers_with_radius, CenterAssignment, DEFAULT_COVER_RADIUS};
pub use gossip::{max_degree_gossip, sigma2, GossipMatrix};
pub use inbox::{DelayedInbox, Envelope};
pub use independence::{independence_number, IndependenceNumber, DEFAULT_EXACT_LIMIT};
pub use io::{read_edge_list, write_edge_list, parse_edge_list, format_edge_list};
pub use spectral::{laplacian_spectrum, symmetric_eigenvalues, SpectralSummary};

use crate::error::{Error, Result};

/// Which neighbourhood convention a consumer wants: the cooperative
/// delayed-feedback algorithms count the agent itself, the federated ones do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighborhood {
    Closed,
    Open,
}

/// Undirected simple graph over `n` agents with a uniform per-edge delay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    delay: usize,
}

impl CommGraph {
    /// Builds a graph from an edge list; rejects self-loops, duplicates and
    /// out-of-range endpoints. Connectivity is not required here.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, delay: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Construction("graph needs at least one agent".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Construction(format!("edge ({u},{v}) out of range for {n} agents")));
            }
            if u == v {
                return Err(Error::Construction(format!("self-loop at {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(Error::Construction(format!("duplicate edge ({},{})", e.0, e.1)));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(CommGraph { n, edges: set, adj, delay })
    }

    pub fn n_agents(&self) -> usize {
        self.n
    }

    pub fn edge_delay(&self) -> usize {
        self.delay
    }

    pub fn with_delay(mut self, delay: usize) -> Self {
        self.delay = delay;
        self
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Sorted neighbours of `v`, excluding `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Sorted neighbourhood of `v` under the requested convention.
    pub fn neighborhood(&self, v: usize, kind: Neighborhood) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        if kind == Neighborhood::Closed {
            let pos = out.binary_search(&v).unwrap_or_else(|p| p);
            out.insert(pos, v);
        }
        out
    }

    /// BFS hop distances from `src`; `usize::MAX` for unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|&d| d != usize::MAX)
    }

    /// Dense Laplacian `D - A`, row-major.
    pub fn laplacian(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for v in 0..n {
            m[v * n + v] = self.degree(v) as f64;
        }
        for &(u, v) in &self.edges {
            m[u * n + v] = -1.0;
            m[v * n + u] = -1.0;
        }
        m
    }
}
