//! Incremental matching of binary-type nodes: the greedy Bayes strategies for
//! the OR and AND value functions, the matching-set posterior and its
//! brute-force oracle, and the super-epoch chain.

mod and_greedy;
mod chain;
mod or_greedy;

use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

pub use and_greedy::{greedy_bayes_and, greedy_bayes_and_with, AndOptions, AndRun, MergeStat, SetSnapshot};
pub use chain::{superepoch_chain, ChainState};
pub use or_greedy::{greedy_bayes_or, greedy_bayes_or_with, OrRun};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueFn {
    And,
    Or,
}

impl ValueFn {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "and" => Some(ValueFn::And),
            "or" => Some(ValueFn::Or),
            _ => None,
        }
    }
}

pub fn pair_value(a: bool, b: bool, f: ValueFn) -> u8 {
    match f {
        ValueFn::And => u8::from(a && b),
        ValueFn::Or => u8::from(a || b),
    }
}

/// Node types drawn i.i.d. Bernoulli(p).
#[derive(Debug, Clone, PartialEq)]
pub struct NodePopulation {
    types: Vec<bool>,
    p: f64,
}

impl NodePopulation {
    pub fn sample(n: usize, p: f64, seed: u64) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::invalid(format!("population size must be even and positive, got {n}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("prior {p} outside [0,1]")));
        }
        let mut r = rng::seeded(rng::derive_seed(seed, 0x7E5));
        Ok(NodePopulation { types: (0..n).map(|_| r.random::<f64>() < p).collect(), p })
    }

    pub fn from_types(types: Vec<bool>, p: f64) -> Result<Self> {
        if types.is_empty() || !types.len().is_multiple_of(2) {
            return Err(Error::invalid("population size must be even and positive"));
        }
        Ok(NodePopulation { types, p })
    }

    pub fn n(&self) -> usize {
        self.types.len()
    }

    pub fn prior(&self) -> f64 {
        self.p
    }

    pub fn is_high(&self, v: usize) -> bool {
        self.types[v]
    }

    pub fn types(&self) -> &[bool] {
        &self.types
    }

    pub fn n_high(&self) -> usize {
        self.types.iter().filter(|&&t| t).count()
    }

    pub fn value(&self, u: usize, v: usize, f: ValueFn) -> u8 {
        pair_value(self.types[u], self.types[v], f)
    }
}

/// OR: `(N1 + min{N1, n - N1}) / 2`; AND: `floor(N1 / 2)`.
pub fn optimal_value(pop: &NodePopulation, f: ValueFn) -> usize {
    let (n, n1) = (pop.n(), pop.n_high());
    match f {
        // n1 + min(n1, n - n1) is even whenever it matters: both summands share parity or min = n - n1
        ValueFn::Or => (n1 + n1.min(n - n1)) / 2,
        ValueFn::And => n1 / 2,
    }
}

/// `pa / (1 - p + pa)`: probability that a matching set of `a` nodes holds
/// its (at most one) high node.
pub fn posterior_pi(a: usize, p: f64) -> f64 {
    let pa = p * a as f64;
    if pa == 0.0 {
        return 0.0;
    }
    pa / (1.0 - p + pa)
}

/// Perfect matching stored as a partner array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<usize>,
}

impl Matching {
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![usize::MAX; n];
        for &(u, v) in pairs {
            if u >= n || v >= n || u == v || partner[u] != usize::MAX || partner[v] != usize::MAX {
                return Err(Error::invalid(format!("({u},{v}) breaks the perfect matching")));
            }
            partner[u] = v;
            partner[v] = u;
        }
        if partner.contains(&usize::MAX) {
            return Err(Error::invalid("matching does not cover every node"));
        }
        Ok(Matching { partner })
    }

    pub fn random<R: Rng>(n: usize, r: &mut R) -> Self {
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.shuffle(r);
        let mut partner = vec![0; n];
        for c in nodes.chunks(2) {
            partner[c[0]] = c[1];
            partner[c[1]] = c[0];
        }
        Matching { partner }
    }

    pub fn partner(&self, v: usize) -> usize {
        self.partner[v]
    }

    pub fn n(&self) -> usize {
        self.partner.len()
    }

    /// Pairs `(u, v)` with `u < v`, ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len()).filter(|&u| u < self.partner[u]).map(|u| (u, self.partner[u])).collect()
    }

    pub fn value(&self, pop: &NodePopulation, f: ValueFn) -> usize {
        self.pairs().iter().map(|&(u, v)| usize::from(pop.value(u, v, f))).sum()
    }

    /// Rematches `(u, u'), (v, v')` into `(u, v), (u', v')` and returns the
    /// size of the symmetric difference between the old and new matchings.
    pub(crate) fn swap(&mut self, u: usize, v: usize) -> usize {
        let (u2, v2) = (self.partner[u], self.partner[v]);
        let removed = [norm(u, u2), norm(v, v2)];
        let added = [norm(u, v), norm(u2, v2)];
        self.partner[u] = v;
        self.partner[v] = u;
        self.partner[u2] = v2;
        self.partner[v2] = u2;
        let mut delta = removed.iter().filter(|e| !added.contains(e)).count();
        delta += added.iter().filter(|e| !removed.contains(e)).count();
        delta
    }

    /// `|M delta M'|` computed from the full pair sets.
    pub fn symmetric_difference(&self, other: &Matching) -> usize {
        let a: std::collections::BTreeSet<_> = self.pairs().into_iter().collect();
        let b: std::collections::BTreeSet<_> = other.pairs().into_iter().collect();
        a.symmetric_difference(&b).count()
    }
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Largest allowed `|M_t delta M_{t-1}|`.
pub const MAX_REMATCH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEvent {
    Start,
    Swap,
    Merge,
    Remove,
    Terminate,
}

impl TraceEvent {
    pub fn label(self) -> &'static str {
        match self {
            TraceEvent::Start => "start",
            TraceEvent::Swap => "swap",
            TraceEvent::Merge => "merge",
            TraceEvent::Remove => "remove",
            TraceEvent::Terminate => "terminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub round: usize,
    pub reward: usize,
    pub regret: usize,
    pub num_sets: usize,
    pub event: TraceEvent,
}

pub fn write_trace_csv<W: Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["round", "reward", "regret", "num_sets", "event"])?;
    for r in rows {
        w.write_record([
            r.round.to_string(),
            r.reward.to_string(),
            r.regret.to_string(),
            r.num_sets.to_string(),
            r.event.label().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_trace(rows: &[TraceRow], path: &Path) -> Result<()> {
    write_trace_csv(rows, std::fs::File::create(path)?)
}

/// Observed pair value from the history.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observation {
    pub u: usize,
    pub v: usize,
    pub value: u8,
}

/// Largest number of nodes the brute-force oracle enumerates.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Exact `P[target contains a high node | observations]` by enumerating all
/// `2^n` type assignments weighted by the prior. `n <= 24`.
pub fn brute_force_posterior(n: usize, p: f64, f: ValueFn, obs: &[Observation], target: &[usize]) -> Result<f64> {
    Ok(brute_force_posteriors(n, p, f, obs, &[target])?[0])
}

/// Batch form of [`brute_force_posterior`]: one enumeration, many targets.
pub fn brute_force_posteriors(n: usize, p: f64, f: ValueFn, obs: &[Observation], targets: &[&[usize]]) -> Result<Vec<f64>> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit(format!("{n} nodes exceed the enumeration limit {BRUTE_FORCE_LIMIT}")));
    }
    let masks: Vec<u32> = targets.iter().map(|t| t.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
    let mut total = 0.0;
    let mut hit = vec![0.0; targets.len()];
    for assign in 0u32..(1u32 << n) {
        let consistent = obs.iter().all(|o| {
            let (a, b) = (assign >> o.u & 1 == 1, assign >> o.v & 1 == 1);
            pair_value(a, b, f) == o.value
        });
        if !consistent {
            continue;
        }
        let k = assign.count_ones() as i32;
        let w = p.powi(k) * (1.0 - p).powi(n as i32 - k);
        total += w;
        for (h, &m) in hit.iter_mut().zip(&masks) {
            if assign & m != 0 {
                *h += w;
            }
        }
    }
    if total == 0.0 {
        return Err(Error::Numeric("observations have zero prior probability".into()));
    }
    Ok(hit.into_iter().map(|h| h / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_tables() {
        assert_eq!(pair_value(false, false, ValueFn::Or), 0);
        assert_eq!(pair_value(false, true, ValueFn::Or), 1);
        assert_eq!(pair_value(true, true, ValueFn::And), 1);
        assert_eq!(pair_value(false, true, ValueFn::And), 0);
        for f in [ValueFn::And, ValueFn::Or] {
            for a in [false, true] {
                for b in [false, true] {
                    assert_eq!(pair_value(a, b, f), pair_value(b, a, f));
                }
            }
        }
    }

    fn brute_optimum(pop: &NodePopulation, f: ValueFn) -> usize {
        fn rec(rest: &mut Vec<usize>, pop: &NodePopulation, f: ValueFn) -> usize {
            if rest.is_empty() {
                return 0;
            }
            let u = rest.remove(0);
            let mut best = 0;
            for i in 0..rest.len() {
                let v = rest.remove(i);
                best = best.max(usize::from(pop.value(u, v, f)) + rec(rest, pop, f));
                rest.insert(i, v);
            }
            rest.insert(0, u);
            best
        }
        rec(&mut (0..pop.n()).collect(), pop, f)
    }

    #[test]
    fn optimal_values() {
        let a = NodePopulation::from_types(vec![true, true, false, false], 0.5).unwrap();
        assert_eq!(optimal_value(&a, ValueFn::Or), 2);
        let b = NodePopulation::from_types(vec![true, true, true, false], 0.5).unwrap();
        assert_eq!(optimal_value(&b, ValueFn::And), 1);
        let z = NodePopulation::sample(10, 0.0, 1).unwrap();
        assert_eq!(optimal_value(&z, ValueFn::Or), 0);
        for bits in 0u32..256 {
            let pop = NodePopulation::from_types((0..8).map(|i| bits >> i & 1 == 1).collect(), 0.5).unwrap();
            for f in [ValueFn::And, ValueFn::Or] {
                assert_eq!(optimal_value(&pop, f), brute_optimum(&pop, f), "{bits:08b} {f:?}");
            }
        }
    }

    #[test]
    fn posterior_values() {
        assert_eq!(posterior_pi(3, 0.0), 0.0);
        assert_eq!(posterior_pi(3, 1.0), 1.0);
        assert!((posterior_pi(2, 0.5) - 2.0 / 3.0).abs() < 1e-15);
        assert!(posterior_pi(1, 0.3) < posterior_pi(2, 0.3) && posterior_pi(2, 0.3) < posterior_pi(4, 0.3));
    }

    #[test]
    fn brute_force_examples() {
        let fresh = [Observation { u: 0, v: 1, value: 0 }];
        let pr = brute_force_posterior(2, 0.5, ValueFn::And, &fresh, &[0, 1]).unwrap();
        assert!((pr - 2.0 / 3.0).abs() < 1e-12);
        // four nodes with every pair observed 0 form one merged set
        let mut all = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                all.push(Observation { u, v, value: 0 });
            }
        }
        let pr = brute_force_posterior(4, 0.3, ValueFn::And, &all, &[0, 1, 2, 3]).unwrap();
        assert!((pr - posterior_pi(4, 0.3)).abs() < 1e-12);
        // node 1 paired high with node 2 forces node 0 low
        let known = [Observation { u: 0, v: 1, value: 0 }, Observation { u: 1, v: 2, value: 1 }];
        assert_eq!(brute_force_posterior(3 + 1, 0.4, ValueFn::And, &known, &[0]).unwrap(), 0.0);
        assert!(brute_force_posterior(25, 0.5, ValueFn::And, &[], &[0]).is_err());
    }

    #[test]
    fn swap_delta() {
        let mut m = Matching::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let before = m.clone();
        assert_eq!(m.swap(0, 2), 4);
        assert_eq!(m.pairs(), vec![(0, 2), (1, 3)]);
        assert_eq!(m.symmetric_difference(&before), 4);
    }
}
