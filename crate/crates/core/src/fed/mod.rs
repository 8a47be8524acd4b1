//! Federated adversarial bandits: FedExp3 over a gossip matrix.

use crate::env::LossTensor;
use crate::error::{Error, Result};
use crate::graph::GossipMatrix;
use crate::policy::entropic_argmin;
use crate::rng::{self, SimRng};
use crate::trace::{is_checkpoint, RegretMeter, RegretTrace};

/// Exploration and learning-rate schedules of FedExp3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FedSchedules {
    pub n_arms: usize,
    pub horizon: usize,
    pub c_w: f64,
    pub eta: f64,
}

impl FedSchedules {
    /// `C_W = min{2 ln T + ln N, sqrt N}/(1 - sigma2) + 3`,
    /// `eta = cbrt((ln K)^2 / ((C_W + 1/2) K^2 T^2))`.
    pub fn new(k: usize, horizon: usize, n_agents: usize, sigma2: f64) -> Result<Self> {
        if k < 2 || horizon == 0 || n_agents == 0 {
            return Err(Error::invalid(format!("FedExp3 needs K >= 2, T >= 1, N >= 1 (K={k}, T={horizon}, N={n_agents})")));
        }
        if !(0.0..1.0).contains(&sigma2) {
            return Err(Error::invalid(format!("sigma2 = {sigma2} must lie in [0,1)")));
        }
        let c_w = c_w(horizon, n_agents, sigma2);
        let (kf, tf) = (k as f64, horizon as f64);
        let eta = (kf.ln().powi(2) / ((c_w + 0.5) * kf * kf * tf * tf)).cbrt();
        Ok(FedSchedules { n_arms: k, horizon, c_w, eta })
    }

    /// `cbrt((C_W + 1/2) K^2 ln K / t)` before clipping.
    pub fn raw_gamma(&self, t: usize) -> f64 {
        let k = self.n_arms as f64;
        ((self.c_w + 0.5) * k * k * k.ln() / t as f64).cbrt()
    }

    pub fn gamma(&self, t: usize) -> f64 {
        self.raw_gamma(t).min(1.0)
    }

    pub fn eta(&self, _t: usize) -> f64 {
        self.eta
    }
}

pub fn c_w(horizon: usize, n_agents: usize, sigma2: f64) -> f64 {
    let (t, n) = (horizon as f64, n_agents as f64);
    (2.0 * t.ln() + n.ln()).min(n.sqrt()) / (1.0 - sigma2) + 3.0
}

/// `5 cbrt(C_W K^2 ln K) T^(2/3)`.
pub fn fedexp3_regret_bound(k: usize, horizon: usize, sigma2: f64, n_agents: usize) -> Result<f64> {
    let s = FedSchedules::new(k, horizon, n_agents, sigma2)?;
    let kf = k as f64;
    Ok(5.0 * (s.c_w * kf * kf * kf.ln()).cbrt() * (horizon as f64).powf(2.0 / 3.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FedConfig {
    pub horizon: usize,
    pub seed: u64,
    pub stride: usize,
}

#[derive(Debug, Clone)]
pub struct FedRoundReport {
    pub t: usize,
    pub gamma: f64,
    pub dists: Vec<Vec<f64>>,
    pub arms: Vec<usize>,
    /// Importance-weighted estimate `g_t^v` of every agent.
    pub estimates: Vec<Vec<f64>>,
}

/// Synchronous FedExp3 rounds over a fixed mixing matrix.
pub struct FedSimulation<'a> {
    env: &'a LossTensor,
    w: &'a GossipMatrix,
    sched: FedSchedules,
    stride: usize,
    t: usize,
    z: Vec<Vec<f64>>,
    x: Vec<Vec<f64>>,
    rng: SimRng,
    meter: RegretMeter,
    trace: RegretTrace,
}

impl<'a> FedSimulation<'a> {
    pub fn new(cfg: &FedConfig, w: &'a GossipMatrix, sigma2: f64, env: &'a LossTensor) -> Result<Self> {
        let (n, k) = (env.n_agents(), env.n_arms());
        if w.n() != n {
            return Err(Error::invalid(format!("gossip matrix is {0}x{0}, environment has {n} agents", w.n())));
        }
        if env.horizon() < cfg.horizon {
            return Err(Error::invalid("environment shorter than the horizon"));
        }
        let sched = FedSchedules::new(k, cfg.horizon, n, sigma2)?;
        Ok(FedSimulation {
            env,
            w,
            sched,
            stride: cfg.stride,
            t: 0,
            z: vec![vec![0.0; k]; n],
            x: vec![vec![1.0 / k as f64; k]; n],
            rng: rng::seeded(cfg.seed),
            meter: RegretMeter::new(n, k),
            trace: RegretTrace::new(false),
        })
    }

    pub fn schedules(&self) -> &FedSchedules {
        &self.sched
    }

    pub fn z(&self) -> &[Vec<f64>] {
        &self.z
    }

    pub fn x(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn is_done(&self) -> bool {
        self.t >= self.sched.horizon
    }

    pub fn step(&mut self) -> Result<FedRoundReport> {
        if self.is_done() {
            return Err(Error::Protocol("horizon reached".into()));
        }
        self.t += 1;
        let t = self.t;
        let (n, k) = (self.env.n_agents(), self.env.n_arms());
        let gamma = self.sched.gamma(t);
        let dists: Vec<Vec<f64>> =
            self.x.iter().map(|x| x.iter().map(|xi| (1.0 - gamma) * xi + gamma / k as f64).collect()).collect();
        let arms: Vec<usize> = dists.iter().map(|p| rng::sample_index(p, &mut self.rng)).collect();
        let losses = self.env.round(t - 1);
        let mean = self.env.mean_round(t - 1);
        let mut estimates = Vec::with_capacity(n);
        for v in 0..n {
            let a = arms[v];
            self.meter.record(v, a, &mean);
            let mut g = vec![0.0; k];
            g[a] = losses[v * k + a] / dists[v][a];
            estimates.push(g);
        }
        // synchronous gossip on the round-start z, self weight included
        let mut z = self.w.mix(&self.z);
        for (zv, g) in z.iter_mut().zip(&estimates) {
            for (a, b) in zv.iter_mut().zip(g) {
                *a += b;
            }
        }
        self.z = z;
        let eta = self.sched.eta(t);
        self.x = self.z.iter().map(|z| entropic_argmin(z, eta).into_vec()).collect();
        if is_checkpoint(t, self.stride, self.sched.horizon) {
            self.trace.push(t, self.meter.all());
        }
        Ok(FedRoundReport { t, gamma, dists, arms, estimates })
    }

    pub fn finish(mut self) -> Result<RegretTrace> {
        while !self.is_done() {
            self.step()?;
        }
        Ok(self.trace)
    }
}

#[derive(Debug, Clone)]
pub struct FedRun {
    pub trace: RegretTrace,
    pub schedules: FedSchedules,
    pub sigma2: f64,
}

impl FedRun {
    pub fn metadata(&self) -> Vec<(String, String)> {
        let s = &self.schedules;
        vec![
            ("sigma2".into(), self.sigma2.to_string()),
            ("c_w".into(), s.c_w.to_string()),
            ("gamma_1".into(), s.gamma(1).to_string()),
            ("gamma_T".into(), s.gamma(s.horizon).to_string()),
            ("raw_gamma_T".into(), s.raw_gamma(s.horizon).to_string()),
            ("eta".into(), s.eta.to_string()),
        ]
    }
}

pub fn run_fedexp3(cfg: &FedConfig, w: &GossipMatrix, sigma2: f64, env: &LossTensor) -> Result<FedRun> {
    let sim = FedSimulation::new(cfg, w, sigma2, env)?;
    let schedules = sim.sched;
    Ok(FedRun { trace: sim.finish()?, schedules, sigma2 })
}
