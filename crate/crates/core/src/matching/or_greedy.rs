//! Greedy Bayes rematching for the OR value function.
//!
//! Pairs fall into three pools: `S` known 0-0 pairs, `U` value-1 pairs whose
//! composition is unknown, `K` pairs known to be 0-1. Each round swaps a
//! uniform `S` pair against a uniform `U` pair.

use rand::Rng;

use super::{optimal_value, Matching, NodePopulation, TraceEvent, TraceRow, ValueFn, MAX_REMATCH};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone)]
pub struct OrRun {
    pub rows: Vec<TraceRow>,
    /// Per-round regret `R_1..R_tau`.
    pub regret: Vec<usize>,
    /// 1-1 pairs still in `U` at the start of each round.
    pub u11: Vec<usize>,
    pub s1: usize,
    pub u1: usize,
    pub tau: usize,
    pub total_regret: usize,
    pub terminal_regret: usize,
    pub optimum: usize,
    /// Largest swap-to-swap `|M delta M'|`.
    pub max_rematch: usize,
    pub final_matching: Matching,
}

impl OrRun {
    /// Regret summed to `horizon`, holding the terminal matching after `tau`.
    pub fn cumulative_to(&self, horizon: usize) -> usize {
        let played: usize = self.regret.iter().take(horizon).sum();
        played + horizon.saturating_sub(self.tau) * self.terminal_regret
    }
}

pub fn greedy_bayes_or(pop: &NodePopulation, seed: u64) -> Result<OrRun> {
    let mut init_rng = rng::seeded(rng::derive_seed(seed, 0x1417));
    let m = Matching::random(pop.n(), &mut init_rng);
    greedy_bayes_or_with(pop, m, seed)
}

/// Runs from a fixed initial matching; `seed` only drives pair selection.
pub fn greedy_bayes_or_with(pop: &NodePopulation, initial: Matching, seed: u64) -> Result<OrRun> {
    if initial.n() != pop.n() {
        return Err(Error::invalid("initial matching size differs from the population"));
    }
    let mut r = rng::seeded(rng::derive_seed(seed, 0x5E1));
    let optimum = optimal_value(pop, ValueFn::Or);
    let mut m = initial;
    let mut s: Vec<(usize, usize)> = Vec::new();
    let mut u: Vec<(usize, usize)> = Vec::new();
    for (a, b) in m.pairs() {
        if pop.value(a, b, ValueFn::Or) == 0 {
            s.push((a, b));
        } else {
            u.push((a, b));
        }
    }
    let is11 = |(a, b): (usize, usize)| pop.is_high(a) && pop.is_high(b);
    let mut u11 = u.iter().filter(|&&e| is11(e)).count();
    let mut known = 0usize;
    let (s1, u1) = (s.len(), u.len());

    let mut run = OrRun {
        rows: Vec::new(),
        regret: Vec::new(),
        u11: Vec::new(),
        s1,
        u1,
        tau: 0,
        total_regret: 0,
        terminal_regret: 0,
        optimum,
        max_rematch: 0,
        final_matching: m.clone(),
    };
    let mut round = 1;
    let mut event = TraceEvent::Start;
    loop {
        let reward = u.len() + known;
        let regret = optimum.checked_sub(reward).ok_or_else(|| Error::Numeric("reward above the optimum".into()))?;
        let done = s.is_empty() || u.is_empty();
        if done && event != TraceEvent::Start {
            event = TraceEvent::Terminate;
        }
        run.rows.push(TraceRow { round, reward, regret, num_sets: s.len(), event });
        run.regret.push(regret);
        run.u11.push(u11);
        if done {
            run.tau = round;
            run.terminal_regret = regret;
            break;
        }
        let i = r.random_range(0..s.len());
        let j = r.random_range(0..u.len());
        let (a, b) = s[i];
        let (x, y) = u[j];
        let delta = m.swap(a, x);
        run.max_rematch = run.max_rematch.max(delta);
        debug_assert!(delta <= MAX_REMATCH);
        let (hx, hy) = (pop.is_high(x), pop.is_high(y));
        u.swap_remove(j);
        if hx && hy {
            u11 -= 1;
            s.swap_remove(i);
            known += 2;
        } else {
            known += 1;
            // the low node of the old U pair rejoins a 0-0 pair
            s[i] = if hx { (b, y) } else { (a, x) };
        }
        round += 1;
        event = TraceEvent::Swap;
    }
    run.total_regret = run.regret.iter().sum();
    run.final_matching = m;
    Ok(run)
}
