//! Cooperative bandits with delayed neighbour messages: CFTRL, DFTRL and the
//! Exp3-Coop and center-based Exp3 baselines.

mod sim;

use std::sync::Arc;

pub use sim::{dftrl_schedules, run_cooperative, CoopAlgorithm, CoopConfig, CoopRun, CoopSimulation, RoundReport};

use crate::policy::TOLERANCES;

/// What an agent broadcasts after playing.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentMessage {
    pub sender: usize,
    pub round: usize,
    pub arm: usize,
    pub loss: f64,
    pub dist: Arc<Vec<f64>>,
}

/// `1 - prod_v (1 - p_v(i))`, evaluated as `p_1 + (1 - p_1)(p_2 + ...)` so a
/// single distribution returns its own probability exactly.
pub fn neighborhood_weight<'a>(dists: impl DoubleEndedIterator<Item = &'a [f64]>, arm: usize) -> f64 {
    dists.rev().fold(0.0, |q, p| p[arm] + (1.0 - p[arm]) * q)
}

/// Collaborative estimate from one round of neighbourhood observations:
/// `loss_i / q(i)` on every arm some member played, zero elsewhere.
/// Returns the estimate and the number of floored denominators.
pub fn collaborative_estimate(k: usize, obs: &[&AgentMessage]) -> (Vec<f64>, usize) {
    let mut est = vec![0.0; k];
    let mut seen = vec![false; k];
    let mut floored = 0;
    for m in obs {
        if seen[m.arm] {
            continue;
        }
        seen[m.arm] = true;
        let mut q = neighborhood_weight(obs.iter().map(|m| m.dist.as_slice()), m.arm);
        if q < TOLERANCES.prob_floor {
            q = TOLERANCES.prob_floor;
            floored += 1;
        }
        est[m.arm] = m.loss / q;
    }
    (est, floored)
}
