use super::{symmetric_eigenvalues, CommGraph};

/// Dense symmetric doubly stochastic mixing matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GossipMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl GossipMatrix {
    /// Wraps a row-major `n x n` matrix without validating it.
    pub fn from_dense(n: usize, entries: Vec<f64>) -> Self {
        assert_eq!(entries.len(), n * n);
        GossipMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            e[i * n + i] = 1.0;
        }
        GossipMatrix { n, entries: e }
    }

    pub fn uniform(n: usize) -> Self {
        GossipMatrix { n, entries: vec![1.0 / n as f64; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.entries[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.entries[u * self.n..(u + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Largest deviation of any row or column sum from 1.
    pub fn stochasticity_error(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let r: f64 = self.row(i).iter().sum();
            let c: f64 = (0..n).map(|j| self.get(j, i)).sum();
            worst = worst.max((r - 1.0).abs()).max((c - 1.0).abs());
        }
        worst
    }

    /// `out[v] = sum_u W[u][v] * x[u]`; with `W` symmetric this is also `W x`.
    pub fn mix(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = self.n;
        let dim = x.first().map_or(0, Vec::len);
        let mut out = vec![vec![0.0; dim]; n];
        for u in 0..n {
            for v in 0..n {
                let w = self.get(u, v);
                if w != 0.0 {
                    for (o, xi) in out[v].iter_mut().zip(&x[u]) {
                        *o += w * xi;
                    }
                }
            }
        }
        out
    }
}

/// `W = I - (D - A) / (2 (1 + d_max))`.
pub fn max_degree_gossip(g: &CommGraph) -> GossipMatrix {
    let n = g.n_agents();
    let scale = 1.0 / (2.0 * (1.0 + g.max_degree() as f64));
    let mut e = vec![0.0; n * n];
    for v in 0..n {
        e[v * n + v] = 1.0 - g.degree(v) as f64 * scale;
    }
    for (u, v) in g.edges() {
        e[u * n + v] = scale;
        e[v * n + u] = scale;
    }
    GossipMatrix { n, entries: e }
}

/// Second-largest singular value; for a symmetric matrix these are the
/// absolute eigenvalues.
pub fn sigma2(w: &GossipMatrix) -> f64 {
    let mut sv: Vec<f64> = symmetric_eigenvalues(w.n, &w.entries).into_iter().map(f64::abs).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.get(1).copied().unwrap_or(0.0).clamp(0.0, 1.0)
}
