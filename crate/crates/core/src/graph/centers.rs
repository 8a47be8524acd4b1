use super::CommGraph;

/// Hop radius within which a chosen center covers other agents.
pub const DEFAULT_COVER_RADIUS: usize = 2;

/// Partition of the agents into center-rooted components.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterAssignment {
    pub centers: Vec<usize>,
    pub center_of: Vec<usize>,
    pub hop_distance: Vec<usize>,
    /// Mass `M(v)`: `min{|N(c)|, K}` at a center, decayed by `exp(-d(v)/6)` elsewhere.
    pub mass: Vec<f64>,
}

impl CenterAssignment {
    pub fn is_center(&self, v: usize) -> bool {
        self.center_of[v] == v
    }

    /// Members of the component rooted at `c`, ascending.
    pub fn component(&self, c: usize) -> Vec<usize> {
        (0..self.center_of.len()).filter(|&v| self.center_of[v] == c).collect()
    }
}

pub fn select_centers(g: &CommGraph, n_arms: usize) -> CenterAssignment {
    select_centers_with_radius(g, n_arms, DEFAULT_COVER_RADIUS)
}

/// Greedy selection: repeatedly choose the uncovered agent with maximum
/// degree (ties: smaller eccentricity, then lower id), mark everything within
/// `radius` hops covered, then attach each agent to its nearest center.
pub fn select_centers_with_radius(g: &CommGraph, n_arms: usize, radius: usize) -> CenterAssignment {
    let n = g.n_agents();
    let dist: Vec<Vec<usize>> = (0..n).map(|v| g.bfs(v)).collect();
    let ecc: Vec<usize> = dist.iter().map(|d| d.iter().copied().max().unwrap_or(0)).collect();
    let mut covered = vec![false; n];
    let mut centers = Vec::new();
    while let Some(c) = (0..n)
        .filter(|&v| !covered[v])
        .min_by_key(|&v| (std::cmp::Reverse(g.degree(v)), ecc[v], v))
    {
        centers.push(c);
        for v in 0..n {
            if dist[c][v] <= radius {
                covered[v] = true;
            }
        }
    }
    centers.sort_unstable();

    let mut center_of = vec![0; n];
    let mut hop_distance = vec![0; n];
    for v in 0..n {
        // centers are sorted, so min_by_key breaks ties toward the lowest id
        let &c = centers.iter().min_by_key(|&&c| dist[c][v]).expect("at least one center");
        center_of[v] = c;
        hop_distance[v] = dist[c][v];
    }
    let center_mass = |c: usize| (g.degree(c) + 1).min(n_arms) as f64;
    let mass = (0..n).map(|v| (-(hop_distance[v] as f64) / 6.0).exp() * center_mass(center_of[v])).collect();
    CenterAssignment { centers, center_of, hop_distance, mass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_has_hub_center() {
        let g = CommGraph::from_edges(20, (1..20).map(|v| (0, v)), 1).unwrap();
        let a = select_centers(&g, 10);
        assert_eq!(a.centers, vec![0]);
        assert!((1..20).all(|v| a.hop_distance[v] == 1 && a.center_of[v] == 0));
        assert_eq!(a.mass[0], 10.0);
    }

    #[test]
    fn path_picks_middle() {
        let g = CommGraph::from_edges(5, (0..4).map(|v| (v, v + 1)), 1).unwrap();
        let a = select_centers(&g, 3);
        assert_eq!(a.centers, vec![2]);
        assert_eq!(a.hop_distance, vec![2, 1, 0, 1, 2]);
        assert!((a.mass[0] - (-2.0f64 / 6.0).exp() * 3.0).abs() < 1e-12);
    }

    #[test]
    fn complete_single_center() {
        let g = CommGraph::from_edges(4, (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))), 1).unwrap();
        let a = select_centers(&g, 10);
        assert_eq!(a.centers, vec![0]);
        assert_eq!(a.hop_distance, vec![0, 1, 1, 1]);
        assert_eq!(a.mass[0], 4.0);
    }

    #[test]
    fn long_path_needs_several_centers() {
        let g = CommGraph::from_edges(12, (0..11).map(|v| (v, v + 1)), 1).unwrap();
        let a = select_centers(&g, 4);
        assert!(a.centers.len() >= 2);
        for v in 0..12 {
            let c = a.center_of[v];
            assert_eq!(a.hop_distance[v], g.bfs(c)[v]);
            assert!(a.centers.iter().all(|&o| g.bfs(o)[v] >= a.hop_distance[v]));
        }
    }
}
