//! Oblivious loss environments: Bernoulli bandit tensors, the federated
//! activation scheme, ratings-derived losses, explicit tensor files and the
//! online convex optimisation problems.

mod oco;
mod ratings;
mod tensor_io;

use std::sync::Arc;

pub use oco::{oco_linear_env, oco_quadratic_env, project_ball, DecisionSet, OcoKind, OcoProblem};
pub use ratings::{parse_ratings, ratings_env, RatingRow, RATING_SCALE};
pub use tensor_io::{explicit_env, format_tensor, parse_tensor, write_tensor};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Dense(Arc<Vec<f64>>),
    /// Homogeneous Bernoulli losses: `loss(t, ., i) = [u(t, i) < mean_i]`.
    Bernoulli { means: Vec<f64>, seed: u64 },
    /// Activation of `n/2` agents sampled with replacement per round.
    Activation { means: Vec<f64>, seed: u64 },
}

/// Loss tensor `loss(t, v, i)` over rounds `0..T`, agents and arms.
///
/// Lazy sources derive every value from `(seed, t, v, i)` alone, so reads are
/// pure and may happen in any order.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTensor {
    horizon: usize,
    n_agents: usize,
    n_arms: usize,
    source: Source,
}

impl LossTensor {
    /// Wraps `(t, v, i)` row-major values; every entry must lie in `[0,1]`.
    pub fn from_dense(horizon: usize, n_agents: usize, n_arms: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != horizon * n_agents * n_arms {
            return Err(Error::invalid(format!(
                "tensor of {} values does not match {horizon}x{n_agents}x{n_arms}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::invalid(format!("loss {} at flat index {pos} outside [0,1]", values[pos])));
        }
        Ok(LossTensor { horizon, n_agents, n_arms, source: Source::Dense(Arc::new(values)) })
    }

    /// Same losses for every agent, given as a `T x K` row-major table.
    pub fn homogeneous(horizon: usize, n_agents: usize, n_arms: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != horizon * n_arms {
            return Err(Error::invalid("homogeneous table must be T x K"));
        }
        let mut values = Vec::with_capacity(horizon * n_agents * n_arms);
        for t in 0..horizon {
            for _ in 0..n_agents {
                values.extend_from_slice(&rows[t * n_arms..(t + 1) * n_arms]);
            }
        }
        Self::from_dense(horizon, n_agents, n_arms, values)
    }

    pub fn zeros(horizon: usize, n_agents: usize, n_arms: usize) -> Self {
        LossTensor {
            horizon,
            n_agents,
            n_arms,
            source: Source::Dense(Arc::new(vec![0.0; horizon * n_agents * n_arms])),
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    pub fn is_lazy(&self) -> bool {
        !matches!(self.source, Source::Dense(_))
    }

    /// Arm means of the generating distribution, when there is one.
    pub fn means(&self) -> Option<&[f64]> {
        match &self.source {
            Source::Bernoulli { means, .. } | Source::Activation { means, .. } => Some(means),
            Source::Dense(_) => None,
        }
    }

    pub fn loss(&self, t: usize, v: usize, i: usize) -> f64 {
        debug_assert!(t < self.horizon && v < self.n_agents && i < self.n_arms);
        match &self.source {
            Source::Dense(values) => values[(t * self.n_agents + v) * self.n_arms + i],
            Source::Bernoulli { means, seed } => indicator(rng::counter_uniform(*seed, t as u64, i as u64) < means[i]),
            Source::Activation { means, seed } => {
                let active = self.activation(*seed, t);
                if !active[v] {
                    return 0.0;
                }
                let idx = (self.n_agents / 2 + v * self.n_arms + i) as u64;
                indicator(rng::counter_uniform(*seed, t as u64, idx) < means[i])
            }
        }
    }

    /// All losses of round `t`, `v`-major (`out[v * K + i]`).
    pub fn round(&self, t: usize) -> Vec<f64> {
        let (n, k) = (self.n_agents, self.n_arms);
        match &self.source {
            Source::Dense(values) => values[t * n * k..(t + 1) * n * k].to_vec(),
            Source::Bernoulli { means, seed } => {
                let mut r = rng::stream_rng(*seed, t as u64);
                let row: Vec<f64> = means.iter().map(|&m| indicator(next_unit(&mut r) < m)).collect();
                row.repeat(n)
            }
            Source::Activation { means, seed } => {
                let mut r = rng::stream_rng(*seed, t as u64);
                let mut active = vec![false; n];
                for _ in 0..n / 2 {
                    active[pick(next_unit(&mut r), n)] = true;
                }
                let mut out = Vec::with_capacity(n * k);
                for &on in &active {
                    for &m in means {
                        let u = next_unit(&mut r);
                        out.push(if on { indicator(u < m) } else { 0.0 });
                    }
                }
                out
            }
        }
    }

    /// Across-agent average loss of round `t`.
    pub fn mean_round(&self, t: usize) -> Vec<f64> {
        let (n, k) = (self.n_agents, self.n_arms);
        let r = self.round(t);
        (0..k).map(|i| (0..n).map(|v| r[v * k + i]).sum::<f64>() / n as f64).collect()
    }

    /// Converts a lazy tensor into its materialised form.
    pub fn materialize(&self) -> LossTensor {
        if let Source::Dense(_) = self.source {
            return self.clone();
        }
        let mut values = Vec::with_capacity(self.horizon * self.n_agents * self.n_arms);
        for t in 0..self.horizon {
            values.extend(self.round(t));
        }
        LossTensor { source: Source::Dense(Arc::new(values)), ..self.clone() }
    }

    fn activation(&self, seed: u64, t: usize) -> Vec<bool> {
        let n = self.n_agents;
        let mut active = vec![false; n];
        let mut r = rng::stream_rng(seed, t as u64);
        for _ in 0..n / 2 {
            active[pick(next_unit(&mut r), n)] = true;
        }
        active
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn next_unit(r: &mut rng::SimRng) -> f64 {
    use rand::RngCore;
    rng::unit_f64(r.next_u64())
}

fn pick(u: f64, n: usize) -> usize {
    ((u * n as f64) as usize).min(n - 1)
}

/// `mu_i = (1 + 8 (i-1)/(K-1)) / 10` for 1-based `i`.
pub fn linear_means(k: usize) -> Vec<f64> {
    (0..k).map(|i| (1.0 + 8.0 * i as f64 / (k - 1) as f64) / 10.0).collect()
}

/// `mu_i = (i-1)/(K-1)` for 1-based `i`.
pub fn unit_means(k: usize) -> Vec<f64> {
    (0..k).map(|i| i as f64 / (k - 1) as f64).collect()
}

/// Homogeneous stochastic bandit with linearly spaced Bernoulli means in `[0.1, 0.9]`.
pub fn bernoulli_linear_env(n_agents: usize, n_arms: usize, horizon: usize, seed: u64) -> Result<LossTensor> {
    if n_arms < 2 {
        return Err(Error::invalid(format!("need at least 2 arms, got {n_arms}")));
    }
    if n_agents == 0 {
        return Err(Error::invalid("need at least one agent"));
    }
    Ok(LossTensor {
        horizon,
        n_agents,
        n_arms,
        source: Source::Bernoulli { means: linear_means(n_arms), seed },
    })
}

/// Each round `N/2` agents are drawn with replacement; active agents draw
/// Bernoulli losses with means `(i-1)/(K-1)`, the rest see loss 0.
pub fn federated_activation_env(n_agents: usize, n_arms: usize, horizon: usize, seed: u64) -> Result<LossTensor> {
    if n_arms < 2 {
        return Err(Error::invalid(format!("need at least 2 arms, got {n_arms}")));
    }
    if n_agents == 0 || !n_agents.is_multiple_of(2) {
        return Err(Error::invalid(format!("agent count must be positive and even, got {n_agents}")));
    }
    Ok(LossTensor {
        horizon,
        n_agents,
        n_arms,
        source: Source::Activation { means: unit_means(n_arms), seed },
    })
}
