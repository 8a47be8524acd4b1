use std::collections::VecDeque;
use std::sync::Arc;

use super::{collaborative_estimate, AgentMessage};
use crate::env::LossTensor;
use crate::error::{Error, Result};
use crate::graph::{
    independence_number, select_centers_with_radius, CenterAssignment, CommGraph, DelayedInbox, DEFAULT_COVER_RADIUS,
    DEFAULT_EXACT_LIMIT,
};
use crate::policy::{hybrid_ftrl_solve, tsallis_ftrl_solve, Exp3, SimplexPoint};
use crate::rng::{self, SimRng};
use crate::trace::{is_checkpoint, RegretMeter, RegretTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoopAlgorithm {
    Cftrl,
    Dftrl,
    Exp3Coop,
    CenterExp3,
}

impl CoopAlgorithm {
    pub const ALL: [CoopAlgorithm; 4] =
        [CoopAlgorithm::Cftrl, CoopAlgorithm::Dftrl, CoopAlgorithm::Exp3Coop, CoopAlgorithm::CenterExp3];

    pub fn label(self) -> &'static str {
        match self {
            CoopAlgorithm::Cftrl => "cftrl",
            CoopAlgorithm::Dftrl => "dftrl",
            CoopAlgorithm::Exp3Coop => "exp3-coop",
            CoopAlgorithm::CenterExp3 => "center-exp3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.label() == s.trim().to_ascii_lowercase())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoopConfig {
    pub algorithm: CoopAlgorithm,
    pub horizon: usize,
    pub seed: u64,
    pub stride: usize,
    /// Replaces every center's learning rate when set.
    pub eta_override: Option<f64>,
    pub cover_radius: usize,
}

impl CoopConfig {
    pub fn new(algorithm: CoopAlgorithm, horizon: usize, seed: u64) -> Self {
        CoopConfig { algorithm, horizon, seed, stride: 1, eta_override: None, cover_radius: DEFAULT_COVER_RADIUS }
    }
}

/// DFTRL rates at 1-based round `t`:
/// `eta = (1/(1-1/e)) (alpha/N + 1/K)^(-1/4) sqrt(2/T)` and
/// `zeta_t = sqrt(ln K / (d t))`, with `d` read as 1 when zero.
pub fn dftrl_schedules(alpha: usize, n: usize, k: usize, horizon: usize, delay: usize, t: usize) -> (f64, f64) {
    let eta = (1.0 / (1.0 - (-1f64).exp()))
        * (alpha as f64 / n as f64 + 1.0 / k as f64).powf(-0.25)
        * (2.0 / horizon as f64).sqrt();
    let zeta = ((k as f64).ln() / (delay.max(1) * t) as f64).sqrt();
    (eta, zeta)
}

#[derive(Debug, Clone)]
enum Learner {
    Tsallis { cum: Vec<f64>, eta: f64 },
    Hybrid { cum: Vec<f64> },
    Exp3(Exp3),
}

#[derive(Debug, Clone)]
enum Role {
    Learner(Learner),
    Copier { center: usize, lag: usize },
}

/// Everything that happened in one round.
#[derive(Debug, Clone)]
pub struct RoundReport {
    pub t: usize,
    pub dists: Vec<Arc<Vec<f64>>>,
    pub arms: Vec<usize>,
    /// Estimate added to each learner's cumulative loss this round.
    pub increments: Vec<Option<Vec<f64>>>,
}

/// Round-by-round cooperative simulation; agents act in id order and share
/// one sampling stream.
pub struct CoopSimulation<'a> {
    cfg: CoopConfig,
    graph: &'a CommGraph,
    env: &'a LossTensor,
    k: usize,
    t: usize,
    roles: Vec<Role>,
    inbox: DelayedInbox<AgentMessage>,
    own: Vec<VecDeque<AgentMessage>>,
    center_hist: Vec<Vec<Arc<Vec<f64>>>>,
    rng: SimRng,
    meter: RegretMeter,
    trace: RegretTrace,
    floored: usize,
    dftrl_eta: f64,
    alpha: Option<(usize, bool)>,
    assignment: Option<CenterAssignment>,
}

impl<'a> CoopSimulation<'a> {
    pub fn new(cfg: CoopConfig, graph: &'a CommGraph, env: &'a LossTensor) -> Result<Self> {
        let n = graph.n_agents();
        let k = env.n_arms();
        if env.n_agents() != n {
            return Err(Error::invalid(format!("environment has {} agents, graph {n}", env.n_agents())));
        }
        if cfg.horizon == 0 || env.horizon() < cfg.horizon {
            return Err(Error::invalid(format!("horizon {} not covered by environment ({})", cfg.horizon, env.horizon())));
        }
        if k < 2 {
            return Err(Error::invalid("need at least 2 arms"));
        }
        if cfg.eta_override.is_some_and(|e| !(e > 0.0)) {
            return Err(Error::invalid("learning-rate override must be positive"));
        }
        let d = graph.edge_delay();
        let mut alpha = None;
        let mut assignment = None;
        let mut dftrl_eta = 0.0;
        let roles: Vec<Role> = match cfg.algorithm {
            CoopAlgorithm::Cftrl | CoopAlgorithm::CenterExp3 => {
                let a = select_centers_with_radius(graph, k, cfg.cover_radius);
                let roles = (0..n)
                    .map(|v| {
                        if a.is_center(v) {
                            let eta = cfg.eta_override.unwrap_or_else(|| (a.mass[v] / (3.0 * cfg.horizon as f64)).sqrt());
                            Ok(Role::Learner(match cfg.algorithm {
                                CoopAlgorithm::Cftrl => Learner::Tsallis { cum: vec![0.0; k], eta },
                                _ => Learner::Exp3(Exp3::new(k, cfg.horizon)?),
                            }))
                        } else {
                            Ok(Role::Copier { center: a.center_of[v], lag: a.hop_distance[v] * d })
                        }
                    })
                    .collect::<Result<_>>()?;
                assignment = Some(a);
                roles
            }
            CoopAlgorithm::Dftrl => {
                let ind = independence_number(graph, DEFAULT_EXACT_LIMIT);
                alpha = Some((ind.value, ind.exact));
                dftrl_eta = dftrl_schedules(ind.value, n, k, cfg.horizon, d, 1).0;
                (0..n).map(|_| Role::Learner(Learner::Hybrid { cum: vec![0.0; k] })).collect()
            }
            CoopAlgorithm::Exp3Coop => {
                (0..n).map(|_| Ok(Role::Learner(Learner::Exp3(Exp3::new(k, cfg.horizon)?)))).collect::<Result<_>>()?
            }
        };
        Ok(CoopSimulation {
            k,
            t: 0,
            inbox: DelayedInbox::new(graph),
            own: vec![VecDeque::new(); n],
            center_hist: vec![Vec::new(); n],
            rng: rng::seeded(cfg.seed),
            meter: RegretMeter::new(n, k),
            trace: RegretTrace::new(false),
            floored: 0,
            roles,
            graph,
            env,
            cfg,
            dftrl_eta,
            alpha,
            assignment,
        })
    }

    pub fn round(&self) -> usize {
        self.t
    }

    pub fn is_done(&self) -> bool {
        self.t >= self.cfg.horizon
    }

    pub fn assignment(&self) -> Option<&CenterAssignment> {
        self.assignment.as_ref()
    }

    /// Learning rate used by a Tsallis center, if `v` is one.
    pub fn center_eta(&self, v: usize) -> Option<f64> {
        match &self.roles[v] {
            Role::Learner(Learner::Tsallis { eta, .. }) => Some(*eta),
            _ => None,
        }
    }

    fn learner_dist(&self, learner: &Learner, t: usize) -> Result<SimplexPoint> {
        match learner {
            Learner::Tsallis { cum, eta } => Ok(tsallis_ftrl_solve(cum, *eta)?.p),
            Learner::Hybrid { cum } => {
                let zeta = dftrl_schedules(1, 1, self.k, self.cfg.horizon, self.graph.edge_delay(), t).1;
                hybrid_ftrl_solve(cum, self.dftrl_eta, zeta)
            }
            Learner::Exp3(e) => Ok(e.probabilities()),
        }
    }

    pub fn step(&mut self) -> Result<RoundReport> {
        if self.is_done() {
            return Err(Error::Protocol(format!("horizon {} already reached", self.cfg.horizon)));
        }
        self.t += 1;
        let t = self.t;
        let (n, k, d) = (self.graph.n_agents(), self.k, self.graph.edge_delay());

        let mut dists: Vec<Option<Arc<Vec<f64>>>> = vec![None; n];
        for v in 0..n {
            if let Role::Learner(l) = &self.roles[v] {
                let p = Arc::new(self.learner_dist(l, t)?.into_vec());
                if self.assignment.is_some() {
                    self.center_hist[v].push(p.clone());
                }
                dists[v] = Some(p);
            }
        }
        for v in 0..n {
            if let Role::Copier { center, lag } = self.roles[v] {
                dists[v] = Some(if t > lag {
                    self.center_hist[center][t - lag - 1].clone()
                } else {
                    Arc::new(vec![1.0 / k as f64; k])
                });
            }
        }
        let dists: Vec<Arc<Vec<f64>>> = dists.into_iter().map(|p| p.expect("every agent assigned")).collect();

        let arms: Vec<usize> = dists.iter().map(|p| rng::sample_index(p, &mut self.rng)).collect();
        let losses = self.env.round(t - 1);
        for v in 0..n {
            let row = &losses[v * k..(v + 1) * k];
            self.meter.record(v, arms[v], row);
            let msg = AgentMessage { sender: v, round: t, arm: arms[v], loss: row[arms[v]], dist: dists[v].clone() };
            self.inbox.broadcast(v, t, &msg)?;
            if matches!(self.roles[v], Role::Learner(_)) {
                self.own[v].push_back(msg);
            }
        }

        let mut increments = vec![None; n];
        for v in 0..n {
            let got = self.inbox.receive(v, t);
            let Role::Learner(_) = self.roles[v] else { continue };
            if t <= d {
                continue;
            }
            let s = t - d;
            let mine = self.own[v].pop_front().filter(|m| m.round == s).ok_or_else(|| {
                Error::Protocol(format!("agent {v} lost its own record of round {s}"))
            })?;
            if got.len() != self.graph.degree(v) || got.iter().any(|e| e.sent_round != s) {
                return Err(Error::Protocol(format!(
                    "agent {v} expected {} messages from round {s}, got {}",
                    self.graph.degree(v),
                    got.len()
                )));
            }
            let mut obs: Vec<&AgentMessage> = vec![&mine];
            obs.extend(got.iter().map(|e| &e.message));
            let (est, floored) = collaborative_estimate(k, &obs);
            self.floored += floored;
            let Role::Learner(learner) = &mut self.roles[v] else { unreachable!() };
            match learner {
                Learner::Tsallis { cum, .. } | Learner::Hybrid { cum } => {
                    for (c, e) in cum.iter_mut().zip(&est) {
                        *c += e;
                    }
                }
                Learner::Exp3(e) => e.update_estimate(&est),
            }
            increments[v] = Some(est);
        }

        if is_checkpoint(t, self.cfg.stride, self.cfg.horizon) {
            self.trace.push(t, self.meter.all());
        }
        Ok(RoundReport { t, dists, arms, increments })
    }

    pub fn finish(mut self) -> Result<CoopRun> {
        while !self.is_done() {
            self.step()?;
        }
        let mut metadata = vec![
            ("algorithm".to_string(), self.cfg.algorithm.label().to_string()),
            ("agents".into(), self.graph.n_agents().to_string()),
            ("arms".into(), self.k.to_string()),
            ("delay".into(), self.graph.edge_delay().to_string()),
            ("horizon".into(), self.cfg.horizon.to_string()),
            ("floored_denominators".into(), self.floored.to_string()),
        ];
        if let Some(a) = &self.assignment {
            metadata.push(("centers".into(), format!("{:?}", a.centers)));
        }
        if let Some((alpha, exact)) = self.alpha {
            metadata.push(("independence_number".into(), alpha.to_string()));
            metadata.push(("independence_exact".into(), exact.to_string()));
            metadata.push(("dftrl_eta".into(), self.dftrl_eta.to_string()));
        }
        Ok(CoopRun { trace: self.trace, floored: self.floored, metadata })
    }
}

#[derive(Debug, Clone)]
pub struct CoopRun {
    pub trace: RegretTrace,
    pub floored: usize,
    pub metadata: Vec<(String, String)>,
}

pub fn run_cooperative(cfg: &CoopConfig, graph: &CommGraph, env: &LossTensor) -> Result<CoopRun> {
    CoopSimulation::new(cfg.clone(), graph, env)?.finish()
}
