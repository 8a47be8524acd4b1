use nalgebra::{DMatrix, SymmetricEigen};

use super::{CommGraph, IndependenceNumber};

/// Spectral and combinatorial summary of a communication graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    /// Laplacian eigenvalues, descending.
    pub laplacian_eigenvalues: Vec<f64>,
    /// Second-smallest Laplacian eigenvalue.
    pub algebraic_connectivity: f64,
    pub sigma2_gossip: Option<f64>,
    pub independence_number: Option<IndependenceNumber>,
}

impl SpectralSummary {
    pub fn largest(&self) -> f64 {
        self.laplacian_eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Eigenvalues of a dense symmetric matrix (row-major), sorted descending.
pub fn symmetric_eigenvalues(n: usize, entries: &[f64]) -> Vec<f64> {
    assert_eq!(entries.len(), n * n, "matrix must be n x n");
    if n == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_row_slice(n, n, entries);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Laplacian spectrum of `g`; the gossip and independence fields are left empty.
pub fn laplacian_spectrum(g: &CommGraph) -> SpectralSummary {
    let ev = symmetric_eigenvalues(g.n_agents(), &g.laplacian());
    let algebraic_connectivity = if ev.len() >= 2 { ev[ev.len() - 2] } else { 0.0 };
    SpectralSummary { laplacian_eigenvalues: ev, algebraic_connectivity, sigma2_gossip: None, independence_number: None }
}
