use rand::Rng;
use rand_distr::StandardNormal;

use super::linear_means;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecisionSet {
    Simplex { dim: usize },
    Ball { radius: f64, dim: usize },
}

impl DecisionSet {
    pub fn dim(&self) -> usize {
        match *self {
            DecisionSet::Simplex { dim } | DecisionSet::Ball { dim, .. } => dim,
        }
    }

    /// Whether `x` lies in the set up to `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match *self {
            DecisionSet::Simplex { .. } => {
                x.iter().all(|&p| p >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
            DecisionSet::Ball { radius, .. } => norm2(x) <= radius + tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OcoKind {
    /// `f(x) = <c, x>` with `c_i ~ Bernoulli(means_i)` per agent and round.
    Linear { means: Vec<f64>, seed: u64 },
    /// `f(x) = <c, x>` with one fixed `c` for every agent and round.
    StationaryLinear { c: Vec<f64> },
    /// `f(x) = 0.5 |x - b|^2` with `b = center_v + noise`, `|b| <= 1`.
    Quadratic { centers: Vec<Vec<f64>>, noise: f64, seed: u64 },
}

/// Per-agent convex losses over a decision set, generated obliviously.
#[derive(Debug, Clone, PartialEq)]
pub struct OcoProblem {
    pub set: DecisionSet,
    pub kind: OcoKind,
    pub n_agents: usize,
    pub horizon: usize,
    /// Bound on the dual norm of every subgradient.
    pub lipschitz: f64,
}

pub fn oco_linear_env(k: usize, n_agents: usize, horizon: usize, seed: u64) -> Result<OcoProblem> {
    if k < 2 || n_agents == 0 {
        return Err(Error::invalid(format!("linear OCO needs K >= 2 and N >= 1, got K={k}, N={n_agents}")));
    }
    Ok(OcoProblem {
        set: DecisionSet::Simplex { dim: k },
        kind: OcoKind::Linear { means: linear_means(k), seed },
        n_agents,
        horizon,
        lipschitz: 1.0,
    })
}

/// Quadratic losses on the unit ball. Agent centers lie in the ball of radius
/// 1/2 and the per-round noise in the ball of radius 1/2.
pub fn oco_quadratic_env(dim: usize, n_agents: usize, horizon: usize, seed: u64) -> Result<OcoProblem> {
    if dim == 0 || n_agents == 0 {
        return Err(Error::invalid("quadratic OCO needs positive dimension and agent count"));
    }
    let mut r = rng::seeded(rng::derive_seed(seed, 0xCE17));
    let centers = (0..n_agents).map(|_| uniform_ball(&mut r, dim, 0.5)).collect();
    Ok(OcoProblem {
        set: DecisionSet::Ball { radius: 1.0, dim },
        kind: OcoKind::Quadratic { centers, noise: 0.5, seed },
        n_agents,
        horizon,
        lipschitz: 2.0,
    })
}

impl OcoProblem {
    pub fn stationary_linear(c: Vec<f64>, n_agents: usize, horizon: usize) -> Result<OcoProblem> {
        if c.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::invalid("stationary costs must lie in [0,1]"));
        }
        Ok(OcoProblem {
            set: DecisionSet::Simplex { dim: c.len() },
            kind: OcoKind::StationaryLinear { c },
            n_agents,
            horizon,
            lipschitz: 1.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    /// Loss parameters of agent `v` at round `t`: `c` for linear, `b` for quadratic.
    pub fn params(&self, t: usize, v: usize) -> Vec<f64> {
        let stream = (t * self.n_agents + v) as u64;
        match &self.kind {
            OcoKind::Linear { means, seed } => {
                let mut r = rng::stream_rng(*seed, stream);
                means.iter().map(|&m| if r.random::<f64>() < m { 1.0 } else { 0.0 }).collect()
            }
            OcoKind::StationaryLinear { c } => c.clone(),
            OcoKind::Quadratic { centers, noise, seed } => {
                let mut r = rng::stream_rng(*seed, stream);
                let e = uniform_ball(&mut r, self.dim(), *noise);
                centers[v].iter().zip(&e).map(|(c, e)| c + e).collect()
            }
        }
    }

    pub fn value_with(&self, params: &[f64], x: &[f64]) -> f64 {
        match self.kind {
            OcoKind::Linear { .. } | OcoKind::StationaryLinear { .. } => dot(params, x),
            OcoKind::Quadratic { .. } => 0.5 * x.iter().zip(params).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        }
    }

    pub fn gradient_with(&self, params: &[f64], x: &[f64]) -> Vec<f64> {
        match self.kind {
            OcoKind::Linear { .. } | OcoKind::StationaryLinear { .. } => params.to_vec(),
            OcoKind::Quadratic { .. } => x.iter().zip(params).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn value(&self, t: usize, v: usize, x: &[f64]) -> f64 {
        self.value_with(&self.params(t, v), x)
    }

    pub fn gradient(&self, t: usize, v: usize, x: &[f64]) -> Vec<f64> {
        self.gradient_with(&self.params(t, v), x)
    }

    /// Dual norm matching the regulariser: sup-norm on the simplex, L2 on the ball.
    pub fn dual_norm(&self, g: &[f64]) -> f64 {
        match self.set {
            DecisionSet::Simplex { .. } => g.iter().fold(0.0, |m: f64, x| m.max(x.abs())),
            DecisionSet::Ball { .. } => norm2(g),
        }
    }

    /// Best fixed point for the network loss `f_t = (1/N) sum_v f_t^v` over
    /// rounds `0..horizon`, with its cumulative loss.
    pub fn comparator(&self, horizon: usize) -> (Vec<f64>, f64) {
        let (n, k) = (self.n_agents, self.dim());
        let mut sum = vec![0.0; k];
        let mut sq = 0.0;
        for t in 0..horizon {
            for v in 0..n {
                let p = self.params(t, v);
                sq += dot(&p, &p);
                for (s, x) in sum.iter_mut().zip(&p) {
                    *s += x;
                }
            }
        }
        let nf = n as f64;
        match self.set {
            DecisionSet::Simplex { .. } => {
                let (best, &c) = sum.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("K >= 1");
                let mut x = vec![0.0; k];
                x[best] = 1.0;
                (x, c / nf)
            }
            DecisionSet::Ball { radius, .. } => {
                let count = (horizon * n) as f64;
                let mean: Vec<f64> = sum.iter().map(|s| s / count).collect();
                let x = project_ball(&mean, radius);
                // sum_{t,v} 0.5|x - b|^2 = 0.5 (count |x|^2 - 2 <x, sum b> + sum |b|^2)
                let total = 0.5 * (count * dot(&x, &x) - 2.0 * dot(&x, &sum) + sq);
                (x, total / nf)
            }
        }
    }
}

fn uniform_ball<R: Rng>(r: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..dim).map(|_| r.sample(StandardNormal)).collect();
    let len = norm2(&g).max(f64::MIN_POSITIVE);
    let scale = radius * r.random::<f64>().powf(1.0 / dim as f64) / len;
    g.into_iter().map(|x| x * scale).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn project_ball(x: &[f64], radius: f64) -> Vec<f64> {
    let n = norm2(x);
    if n > radius {
        x.iter().map(|v| v * radius / n).collect()
    } else {
        x.to_vec()
    }
}
