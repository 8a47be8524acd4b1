use super::CommGraph;

pub const DEFAULT_EXACT_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndependenceNumber {
    pub value: usize,
    /// `false` when `value` is only a greedy lower bound.
    pub exact: bool,
}

/// Exact branch-and-bound up to `exact_limit` agents (capped at 64), greedy
/// minimum-degree lower bound above.
pub fn independence_number(g: &CommGraph, exact_limit: usize) -> IndependenceNumber {
    let n = g.n_agents();
    if n <= exact_limit.min(64) {
        let nbr: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut best = 0;
        branch(&nbr, all, 0, &mut best);
        IndependenceNumber { value: best.max(1), exact: true }
    } else {
        IndependenceNumber { value: greedy(g).max(1), exact: false }
    }
}

fn branch(nbr: &[u64], cand: u64, size: usize, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + cand.count_ones() as usize <= *best {
        return;
    }
    // branch on the candidate with the most candidate neighbours
    let mut pick = cand.trailing_zeros() as usize;
    let mut pick_deg = 0;
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (nbr[v] & cand).count_ones();
        if d > pick_deg {
            pick = v;
            pick_deg = d;
        }
    }
    if pick_deg == 0 {
        // remaining candidates are pairwise non-adjacent
        *best = (*best).max(size + cand.count_ones() as usize);
        return;
    }
    branch(nbr, cand & !(1 << pick) & !nbr[pick], size + 1, best);
    branch(nbr, cand & !(1 << pick), size, best);
}

fn greedy(g: &CommGraph) -> usize {
    let n = g.n_agents();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut count = 0;
    loop {
        let next = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (deg[v], v));
        let Some(v) = next else { break };
        count += 1;
        let mut removed = vec![v];
        removed.extend(g.neighbors(v).iter().copied().filter(|&u| alive[u]));
        for &r in &removed {
            alive[r] = false;
        }
        for &r in &removed {
            for &w in g.neighbors(r) {
                if alive[w] {
                    deg[w] -= 1;
                }
            }
        }
    }
    count
}
