//! Single-agent bandit policies and the constrained FTRL kernels shared by
//! the multi-agent algorithms.

mod exp3;
mod solvers;
mod tsallis_inf;

pub use exp3::{exp3_gamma, Exp3};
pub use solvers::{entropic_argmin, hybrid_ftrl_solve, hybrid_kkt_residual, tsallis_ftrl_solve, TsallisSolution};
pub use tsallis_inf::TsallisInf;

use rand::Rng;

use crate::env::LossTensor;
use crate::error::{Error, Result};
use crate::rng;

/// Numeric tolerances used by every solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub simplex_sum: f64,
    pub kkt: f64,
    pub max_iterations: usize,
    /// Floor for importance-weight denominators that underflow.
    pub prob_floor: f64,
}

pub const TOLERANCES: Tolerances = Tolerances { simplex_sum: 1e-12, kkt: 1e-10, max_iterations: 200, prob_floor: 1e-12 };

/// Probability vector over K arms.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if !is_simplex(&probs, TOLERANCES.simplex_sum) {
            return Err(Error::Numeric(format!("not a distribution: sum {}", probs.iter().sum::<f64>())));
        }
        Ok(SimplexPoint(probs))
    }

    pub fn uniform(k: usize) -> Self {
        SimplexPoint(vec![1.0 / k as f64; k])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, r: &mut R) -> usize {
        rng::sample_index(&self.0, r)
    }
}

impl std::ops::Index<usize> for SimplexPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub fn is_simplex(p: &[f64], tol: f64) -> bool {
    !p.is_empty() && p.iter().all(|&x| x >= 0.0 && x.is_finite()) && (p.iter().sum::<f64>() - 1.0).abs() <= tol
}

/// `loss / prob` on the chosen arm, zero elsewhere.
pub fn importance_weighted_estimate(k: usize, arm: usize, loss: f64, prob: f64) -> Result<Vec<f64>> {
    if !(prob > 0.0) {
        return Err(Error::invalid(format!("importance weight denominator {prob} must be positive")));
    }
    if arm >= k {
        return Err(Error::invalid(format!("arm {arm} out of range for {k} arms")));
    }
    let mut out = vec![0.0; k];
    out[arm] = loss / prob;
    Ok(out)
}

pub(crate) fn check_loss(loss: f64) -> Result<()> {
    if (0.0..=1.0).contains(&loss) {
        Ok(())
    } else {
        Err(Error::invalid(format!("loss {loss} outside [0,1]")))
    }
}

/// Bandit policy driven one round at a time.
pub trait BanditPolicy {
    fn distribution(&mut self) -> Result<SimplexPoint>;
    /// Feeds back the loss of the arm drawn from the last distribution.
    fn observe(&mut self, arm: usize, loss: f64) -> Result<()>;
}

/// Plays `policy` for agent 0 of `env` and returns the realised regret
/// against the best fixed arm.
pub fn run_single_agent<P: BanditPolicy>(policy: &mut P, env: &LossTensor, seed: u64) -> Result<f64> {
    let mut r = rng::seeded(seed);
    let k = env.n_arms();
    let mut cum = vec![0.0; k];
    let mut incurred = 0.0;
    for t in 0..env.horizon() {
        let p = policy.distribution()?;
        let arm = p.sample(&mut r);
        let row = &env.round(t)[..k];
        incurred += row[arm];
        for (c, l) in cum.iter_mut().zip(row) {
            *c += l;
        }
        policy.observe(arm, row[arm])?;
    }
    Ok(incurred - cum.iter().copied().fold(f64::INFINITY, f64::min))
}
