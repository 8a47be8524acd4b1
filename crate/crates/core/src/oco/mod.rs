//! Federated online convex optimisation with randomly skipped single-edge
//! gossip (FedOCO).

use rand::Rng;

use crate::env::{DecisionSet, OcoProblem};
use crate::error::{Error, Result};
use crate::graph::{laplacian_spectrum, CommGraph};
use crate::policy::entropic_argmin;
use crate::rng::{self, SimRng};
use crate::trace::{is_checkpoint, RegretTrace};

/// Dual-averaging step `argmin <z, x> + psi(x)/eta` for the set's regulariser.
pub fn oco_projection(z: &[f64], eta: f64, set: &DecisionSet) -> Vec<f64> {
    match *set {
        DecisionSet::Simplex { .. } => entropic_argmin(z, eta).into_vec(),
        DecisionSet::Ball { radius, .. } => {
            let y: Vec<f64> = z.iter().map(|zi| -eta * zi).collect();
            crate::env::project_ball(&y, radius)
        }
    }
}

/// Replaces `z[u]` and `z[w]` by their average.
pub fn gossip_average(z: &mut [Vec<f64>], u: usize, w: usize) {
    let avg: Vec<f64> = z[u].iter().zip(&z[w]).map(|(a, b)| 0.5 * (a + b)).collect();
    z[u].clone_from(&avg);
    z[w] = avg;
}

/// `R` with `psi(x*) <= R^2`: `sqrt(ln K)` for the entropic simplex,
/// `radius^2 / 2` for the Euclidean ball.
pub fn regulariser_radius(set: &DecisionSet) -> f64 {
    match *set {
        DecisionSet::Simplex { dim } => (dim as f64).ln().sqrt(),
        DecisionSet::Ball { radius, .. } => radius * radius / 2.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FedOcoSchedule {
    pub r: f64,
    pub lipschitz: f64,
    /// `1 - lambda_2(W)` of the expected gossip matrix, when usable.
    pub spectral_gap: Option<f64>,
}

impl FedOcoSchedule {
    /// Expected mixing `W = I - (D - A)/(T^alpha |E|)` gives
    /// `1 - lambda_2(W) = lambda_{N-1}(M) / (T^alpha |E|)`.
    pub fn new(problem: &OcoProblem, g: &CommGraph, alpha: f64) -> Self {
        let r = regulariser_radius(&problem.set);
        let gap = if g.n_agents() >= 2 && g.n_edges() > 0 {
            let conn = laplacian_spectrum(g).algebraic_connectivity;
            let gap = conn / ((problem.horizon as f64).powf(alpha) * g.n_edges() as f64);
            (gap > 1e-12 && gap <= 1.0).then_some(gap)
        } else {
            None
        };
        FedOcoSchedule { r, lipschitz: problem.lipschitz, spectral_gap: gap }
    }

    /// `eta_t = R sqrt(1 - lambda_2) / (L sqrt t)`, or `R / (L sqrt t)` when degenerate.
    pub fn eta(&self, t: usize) -> f64 {
        self.r * self.spectral_gap.map_or(1.0, f64::sqrt) / (self.lipschitz * (t as f64).sqrt())
    }

    pub fn is_fallback(&self) -> bool {
        self.spectral_gap.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FedOcoConfig {
    pub alpha: f64,
    pub horizon: usize,
    pub seed: u64,
    pub stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FedOcoRound {
    pub t: usize,
    pub edge: Option<(usize, usize)>,
    pub messages: u64,
    pub max_gradient_norm: f64,
}

pub struct FedOcoSimulation<'a> {
    problem: &'a OcoProblem,
    edges: Vec<(usize, usize)>,
    cfg: FedOcoConfig,
    schedule: FedOcoSchedule,
    comm_prob: f64,
    t: usize,
    z: Vec<Vec<f64>>,
    x: Vec<Vec<f64>>,
    rng: SimRng,
    q: u64,
    incurred: Vec<f64>,
    sum_params: Vec<f64>,
    sum_sq: f64,
    trace: RegretTrace,
}

impl<'a> FedOcoSimulation<'a> {
    pub fn new(cfg: FedOcoConfig, problem: &'a OcoProblem, g: &CommGraph) -> Result<Self> {
        if !(0.0..1.0).contains(&cfg.alpha) {
            return Err(Error::invalid(format!("skipping parameter {} outside [0,1)", cfg.alpha)));
        }
        if g.n_agents() != problem.n_agents || cfg.horizon == 0 || cfg.horizon > problem.horizon {
            return Err(Error::invalid("graph, problem and horizon sizes disagree"));
        }
        let (n, k) = (problem.n_agents, problem.dim());
        let x0 = oco_projection(&vec![0.0; k], 1.0, &problem.set);
        Ok(FedOcoSimulation {
            problem,
            edges: g.edge_list(),
            schedule: FedOcoSchedule::new(problem, g, cfg.alpha),
            comm_prob: (cfg.horizon as f64).powf(-cfg.alpha),
            t: 0,
            z: vec![vec![0.0; k]; n],
            x: vec![x0; n],
            rng: rng::seeded(cfg.seed),
            q: 0,
            incurred: vec![0.0; n],
            sum_params: vec![0.0; k],
            sum_sq: 0.0,
            trace: RegretTrace::new(true),
            cfg,
        })
    }

    pub fn schedule(&self) -> &FedOcoSchedule {
        &self.schedule
    }

    pub fn iterates(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn z(&self) -> &[Vec<f64>] {
        &self.z
    }

    pub fn messages(&self) -> u64 {
        self.q
    }

    pub fn is_done(&self) -> bool {
        self.t >= self.cfg.horizon
    }

    /// Cumulative network loss of the best fixed point over rounds so far.
    fn comparator(&self) -> f64 {
        let n = self.problem.n_agents as f64;
        match self.problem.set {
            DecisionSet::Simplex { .. } => self.sum_params.iter().copied().fold(f64::INFINITY, f64::min) / n,
            DecisionSet::Ball { radius, .. } => {
                let count = (self.t * self.problem.n_agents) as f64;
                let mean: Vec<f64> = self.sum_params.iter().map(|s| s / count).collect();
                let x = crate::env::project_ball(&mean, radius);
                let xx: f64 = x.iter().map(|a| a * a).sum();
                let xs: f64 = x.iter().zip(&self.sum_params).map(|(a, b)| a * b).sum();
                0.5 * (count * xx - 2.0 * xs + self.sum_sq) / n
            }
        }
    }

    pub fn step(&mut self) -> Result<FedOcoRound> {
        if self.is_done() {
            return Err(Error::Protocol("horizon reached".into()));
        }
        self.t += 1;
        let t = self.t;
        let n = self.problem.n_agents;
        let params: Vec<Vec<f64>> = (0..n).map(|v| self.problem.params(t - 1, v)).collect();
        for p in &params {
            self.sum_sq += p.iter().map(|a| a * a).sum::<f64>();
            for (s, a) in self.sum_params.iter_mut().zip(p) {
                *s += a;
            }
        }
        let mut max_norm: f64 = 0.0;
        let grads: Vec<Vec<f64>> = (0..n)
            .map(|v| {
                let g = self.problem.gradient_with(&params[v], &self.x[v]);
                max_norm = max_norm.max(self.problem.dual_norm(&g));
                g
            })
            .collect();
        for v in 0..n {
            let f: f64 = params.iter().map(|p| self.problem.value_with(p, &self.x[v])).sum::<f64>() / n as f64;
            self.incurred[v] += f;
        }

        let fires = self.rng.random::<f64>() < self.comm_prob;
        let edge = if fires && !self.edges.is_empty() {
            let e = self.edges[self.rng.random_range(0..self.edges.len())];
            gossip_average(&mut self.z, e.0, e.1);
            Some(e)
        } else {
            None
        };
        let m_t = if fires { 2 } else { 0 };
        self.q += m_t;
        let eta = self.schedule.eta(t);
        for v in 0..n {
            for (a, b) in self.z[v].iter_mut().zip(&grads[v]) {
                *a += b;
            }
            self.x[v] = oco_projection(&self.z[v], eta, &self.problem.set);
        }

        if is_checkpoint(t, self.cfg.stride, self.cfg.horizon) {
            let best = self.comparator();
            self.trace.push_metered(t, self.incurred.iter().map(|c| c - best).collect(), self.q);
        }
        Ok(FedOcoRound { t, edge, messages: m_t, max_gradient_norm: max_norm })
    }

    pub fn finish(mut self) -> Result<FedOcoRun> {
        while !self.is_done() {
            self.step()?;
        }
        Ok(FedOcoRun { trace: self.trace, q_total: self.q, schedule: self.schedule, alpha: self.cfg.alpha })
    }
}

#[derive(Debug, Clone)]
pub struct FedOcoRun {
    pub trace: RegretTrace,
    pub q_total: u64,
    pub schedule: FedOcoSchedule,
    pub alpha: f64,
}

impl FedOcoRun {
    pub fn metadata(&self) -> Vec<(String, String)> {
        let s = &self.schedule;
        vec![
            ("alpha".into(), self.alpha.to_string()),
            ("lambda2_expected_w".into(), s.spectral_gap.map_or("n/a".into(), |g| (1.0 - g).to_string())),
            ("eta_1".into(), s.eta(1).to_string()),
            ("radius_r".into(), s.r.to_string()),
            ("lipschitz".into(), s.lipschitz.to_string()),
            ("eta_fallback".into(), s.is_fallback().to_string()),
            ("q_total".into(), self.q_total.to_string()),
        ]
    }
}

pub fn run_fedoco(cfg: &FedOcoConfig, problem: &OcoProblem, g: &CommGraph) -> Result<FedOcoRun> {
    FedOcoSimulation::new(cfg.clone(), problem, g)?.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{oco_linear_env, oco_quadratic_env};
    use crate::graph::{build_topology, Topology};

    #[test]
    fn projection_cases() {
        let s = DecisionSet::Simplex { dim: 3 };
        assert_eq!(oco_projection(&[0.0; 3], 1.0, &s), vec![1.0 / 3.0; 3]);
        let b = DecisionSet::Ball { radius: 1.0, dim: 2 };
        assert_eq!(oco_projection(&[0.0, 0.0], 1.0, &b), vec![0.0, 0.0]);
        assert_eq!(oco_projection(&[-2.0, 0.0], 1.0, &b), vec![1.0, 0.0]);
        assert_eq!(oco_projection(&[0.25, 0.0], 2.0, &b), vec![-0.5, 0.0]);
    }

    #[test]
    fn averaging_example() {
        let mut z = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        gossip_average(&mut z, 0, 1);
        assert_eq!(z, vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
    }

    #[test]
    fn alpha_zero_always_communicates() {
        let g = build_topology(&Topology::Complete { n: 4 }, 1, 0).unwrap();
        let p = oco_linear_env(3, 4, 100, 2).unwrap();
        let run = run_fedoco(&FedOcoConfig { alpha: 0.0, horizon: 100, seed: 1, stride: 10 }, &p, &g).unwrap();
        assert_eq!(run.q_total, 200);
        assert_eq!(run.trace.messages.as_ref().unwrap().last(), Some(&200));
    }

    #[test]
    fn iterates_feasible_and_gradients_bounded() {
        let g = build_topology(&Topology::Grid { rows: 2, cols: 2 }, 1, 0).unwrap();
        for p in [oco_linear_env(4, 4, 300, 5).unwrap(), oco_quadratic_env(4, 4, 300, 5).unwrap()] {
            let mut sim = FedOcoSimulation::new(FedOcoConfig { alpha: 0.5, horizon: 300, seed: 9, stride: 300 }, &p, &g).unwrap();
            while !sim.is_done() {
                let r = sim.step().unwrap();
                assert!(r.max_gradient_norm <= p.lipschitz + 1e-12);
                assert!(sim.iterates().iter().all(|x| p.set.contains(x, 1e-12)));
            }
        }
    }

    #[test]
    fn comparator_matches_env() {
        let g = build_topology(&Topology::Complete { n: 3 }, 1, 0).unwrap();
        for p in [oco_linear_env(3, 3, 50, 1).unwrap(), oco_quadratic_env(2, 3, 50, 1).unwrap()] {
            let mut sim = FedOcoSimulation::new(FedOcoConfig { alpha: 0.5, horizon: 50, seed: 2, stride: 50 }, &p, &g).unwrap();
            while !sim.is_done() {
                sim.step().unwrap();
            }
            let (_, best) = p.comparator(50);
            assert!((sim.comparator() - best).abs() < 1e-9);
        }
    }

    #[test]
    fn stationary_comparator_value() {
        let g = build_topology(&Topology::Complete { n: 2 }, 1, 0).unwrap();
        let p = OcoProblem::stationary_linear(vec![0.4, 0.1, 0.8], 2, 20).unwrap();
        let run = run_fedoco(&FedOcoConfig { alpha: 0.25, horizon: 20, seed: 0, stride: 20 }, &p, &g).unwrap();
        let uniform_cost = 20.0 * (0.4 + 0.1 + 0.8) / 3.0;
        // regret is at most what uniform play would cost over the comparator T * min c
        assert!(run.trace.final_regret().iter().all(|&r| r <= uniform_cost - 20.0 * 0.1 + 1e-9));
    }
}
