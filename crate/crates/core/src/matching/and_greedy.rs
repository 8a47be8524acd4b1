//! Least-Size-Merge for the AND value function.
//!
//! Matching sets hold at most one high node. The two smallest sets are
//! combined by IS-MERGE, which sweeps cross pairs until either a 1-1 pair
//! shows up (both sets are resolved and dropped) or every cross pair has
//! been seen (the union becomes a new set).

use std::collections::BTreeMap;

use super::{optimal_value, Matching, NodePopulation, Observation, TraceEvent, TraceRow, ValueFn, MAX_REMATCH};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, Default)]
pub struct AndOptions {
    /// Keep one trace row per round.
    pub record_rows: bool,
    /// Keep the observation log, set snapshots and coverage checks.
    pub instrument: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeStat {
    pub a: usize,
    pub b: usize,
    pub steps: usize,
    pub merged: bool,
    /// Every cross pair was matched at some step (only tracked when instrumented).
    pub covered: Option<bool>,
}

/// Sets in play after a merge or remove, with the observation prefix that
/// was available at that moment.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSnapshot {
    pub round: usize,
    pub observations: usize,
    pub sets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct AndRun {
    pub rows: Vec<TraceRow>,
    pub tau: usize,
    pub total_regret: usize,
    pub terminal_regret: usize,
    pub optimum: usize,
    pub max_rematch: usize,
    pub merges: Vec<MergeStat>,
    /// Set sizes each time the smallest size grows.
    pub boundaries: Vec<Vec<usize>>,
    pub observations: Vec<Observation>,
    pub snapshots: Vec<SetSnapshot>,
    pub final_matching: Matching,
}

impl AndRun {
    pub fn cumulative_to(&self, horizon: usize) -> usize {
        if horizon >= self.tau {
            return self.total_regret + (horizon - self.tau) * self.terminal_regret;
        }
        self.rows.iter().take(horizon).map(|r| r.regret).sum()
    }
}

pub fn greedy_bayes_and(pop: &NodePopulation, seed: u64, opts: AndOptions) -> Result<AndRun> {
    let mut r = rng::seeded(rng::derive_seed(seed, 0x1417));
    let m = Matching::random(pop.n(), &mut r);
    greedy_bayes_and_with(pop, m, opts)
}

struct State<'a> {
    pop: &'a NodePopulation,
    m: Matching,
    opts: AndOptions,
    round: usize,
    count11: usize,
    optimum: usize,
    total: usize,
    last_regret: usize,
    max_rematch: usize,
    rows: Vec<TraceRow>,
    obs: Vec<Observation>,
    // scratch: position of a node inside the A or B list of the running merge
    pos: Vec<usize>,
    side: Vec<u8>,
}

impl State<'_> {
    fn observe(&mut self, u: usize, v: usize) -> u8 {
        let value = self.pop.value(u, v, ValueFn::And);
        if self.opts.instrument {
            self.obs.push(Observation { u: u.min(v), v: u.max(v), value });
        }
        value
    }

    fn record(&mut self, num_sets: usize, event: TraceEvent) -> Result<()> {
        let regret = self.optimum.checked_sub(self.count11).ok_or_else(|| Error::Numeric("reward above the optimum".into()))?;
        self.total += regret;
        self.last_regret = regret;
        if self.opts.record_rows {
            self.rows.push(TraceRow { round: self.round, reward: self.count11, regret, num_sets, event });
        }
        Ok(())
    }

    /// Returns `true` when A and B merge; `false` when a 1-1 pair was found.
    fn is_merge(&mut self, a: &[usize], b: &[usize], num_sets: usize, stats: &mut Vec<MergeStat>) -> Result<bool> {
        let (na, nb) = (a.len(), b.len());
        for (i, &u) in a.iter().enumerate() {
            self.pos[u] = i;
            self.side[u] = 1;
        }
        for (j, &v) in b.iter().enumerate() {
            self.pos[v] = j;
            self.side[v] = 2;
        }
        // candidate lists P_u, all of B in id order; dropped[i*nb + j] removes b[j] from P_{a[i]}
        let mut dropped = vec![false; na * nb];
        let mut covered = if self.opts.instrument { Some(vec![false; na * nb]) } else { None };
        let mut cursor = vec![0usize; na];
        let mut remaining = na * nb;
        let mut steps = 0;
        let mut outcome = true;
        'outer: for i in 0..na {
            let u = a[i];
            loop {
                while cursor[i] < nb && dropped[i * nb + cursor[i]] {
                    cursor[i] += 1;
                }
                if cursor[i] == nb {
                    break;
                }
                let v = b[cursor[i]];
                let (u2, v2) = (self.m.partner(u), self.m.partner(v));
                debug_assert!(u2 != v && v2 != u);
                let before = self.pop.value(u, u2, ValueFn::And) + self.pop.value(v, v2, ValueFn::And);
                let delta = self.m.swap(u, v);
                self.max_rematch = self.max_rematch.max(delta);
                debug_assert!(delta <= MAX_REMATCH);
                self.round += 1;
                steps += 1;
                let w1 = self.observe(u, v);
                let w2 = self.observe(u2, v2);
                self.count11 = self.count11 + usize::from(w1 + w2) - usize::from(before);
                if let Some(cov) = covered.as_mut() {
                    for (x, y) in [(u, v), (u2, v2)] {
                        match (self.side[x], self.side[y]) {
                            (1, 2) => cov[self.pos[x] * nb + self.pos[y]] = true,
                            (2, 1) => cov[self.pos[y] * nb + self.pos[x]] = true,
                            _ => {}
                        }
                    }
                }
                if w1 + w2 == 1 {
                    self.record(num_sets, TraceEvent::Remove)?;
                    outcome = false;
                    break 'outer;
                }
                let mut drop = |k: usize| {
                    if !dropped[k] {
                        dropped[k] = true;
                        remaining -= 1;
                    }
                };
                drop(i * nb + self.pos[v]);
                if self.side[u2] == 1 && self.side[v2] == 2 {
                    drop(self.pos[u2] * nb + self.pos[v2]);
                }
                if self.side[v2] == 1 && self.side[u2] == 2 {
                    drop(self.pos[v2] * nb + self.pos[u2]);
                }
                let last = remaining == 0;
                let ev = if last { TraceEvent::Merge } else { TraceEvent::Swap };
                self.record(num_sets, ev)?;
                if last {
                    break 'outer;
                }
            }
        }
        for &x in a.iter().chain(b) {
            self.side[x] = 0;
        }
        stats.push(MergeStat {
            a: na,
            b: nb,
            steps,
            merged: outcome,
            covered: covered.map(|c| c.iter().all(|&x| x)),
        });
        Ok(outcome)
    }
}

/// Runs Least-Size-Merge from a fixed initial matching. Deterministic given
/// the matching and the types.
pub fn greedy_bayes_and_with(pop: &NodePopulation, initial: Matching, opts: AndOptions) -> Result<AndRun> {
    let n = pop.n();
    if initial.n() != n {
        return Err(Error::invalid("initial matching size differs from the population"));
    }
    let mut st = State {
        pop,
        m: initial,
        opts,
        round: 1,
        count11: 0,
        optimum: optimal_value(pop, ValueFn::And),
        total: 0,
        last_regret: 0,
        max_rematch: 0,
        rows: Vec::new(),
        obs: Vec::new(),
        pos: vec![0; n],
        side: vec![0; n],
    };
    // keyed by (size, lowest node id) so the first entries are the least-size sets
    let mut sets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (u, v) in st.m.pairs() {
        if st.observe(u, v) == 1 {
            st.count11 += 1;
        } else {
            sets.insert((2, u), vec![u, v]);
        }
    }
    st.record(sets.len(), TraceEvent::Start)?;
    let mut merges = Vec::new();
    let mut boundaries = Vec::new();
    let mut snapshots = Vec::new();
    let mut min_size = sets.keys().next().map_or(0, |k| k.0);
    let snapshot = |st: &State, sets: &BTreeMap<(usize, usize), Vec<usize>>| SetSnapshot {
        round: st.round,
        observations: st.obs.len(),
        sets: sets.values().cloned().collect(),
    };
    if opts.instrument {
        snapshots.push(snapshot(&st, &sets));
    }
    while sets.len() > 1 {
        let (_, a) = sets.pop_first().expect("two sets");
        let (_, b) = sets.pop_first().expect("two sets");
        let num_sets = sets.len();
        if st.is_merge(&a, &b, num_sets, &mut merges)? {
            let mut union = a;
            union.extend(b);
            union.sort_unstable();
            sets.insert((union.len(), union[0]), union);
        }
        if let Some(&(s, _)) = sets.keys().next() {
            if s > min_size {
                min_size = s;
                boundaries.push(sets.keys().map(|k| k.0).collect());
            }
        }
        if opts.instrument {
            snapshots.push(snapshot(&st, &sets));
        }
    }
    if st.round > 1 {
        if let Some(last) = st.rows.last_mut() {
            last.event = TraceEvent::Terminate;
        }
    }
    Ok(AndRun {
        rows: st.rows,
        tau: st.round,
        total_regret: st.total,
        terminal_regret: st.last_regret,
        optimum: st.optimum,
        max_rematch: st.max_rematch,
        merges,
        boundaries,
        observations: st.obs,
        snapshots,
        final_matching: st.m,
    })
}
