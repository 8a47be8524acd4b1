use super::{check_loss, tsallis_ftrl_solve, BanditPolicy, SimplexPoint};
use crate::error::{Error, Result};

/// Tsallis-INF: FTRL with regulariser `-(4/eta_t) sum sqrt(p)` and
/// `eta_t = 2/sqrt(t)`, on importance-weighted loss estimates.
#[derive(Debug, Clone)]
pub struct TsallisInf {
    cum: Vec<f64>,
    round: usize,
    last: Option<SimplexPoint>,
}

impl TsallisInf {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("Tsallis-INF needs K >= 2, got {k}")));
        }
        Ok(TsallisInf { cum: vec![0.0; k], round: 0, last: None })
    }

    /// Learning rate of 1-based round `t`.
    pub fn eta(t: usize) -> f64 {
        2.0 / (t as f64).sqrt()
    }

    pub fn cumulative_estimate(&self) -> &[f64] {
        &self.cum
    }
}

impl BanditPolicy for TsallisInf {
    fn distribution(&mut self) -> Result<SimplexPoint> {
        self.round += 1;
        // the shared solver's regulariser is -(2/eta) sum sqrt(p)
        let p = tsallis_ftrl_solve(&self.cum, Self::eta(self.round) / 2.0)?.p;
        self.last = Some(p.clone());
        Ok(p)
    }

    fn observe(&mut self, arm: usize, loss: f64) -> Result<()> {
        check_loss(loss)?;
        let p = self.last.take().ok_or_else(|| Error::Protocol("observe before distribution".into()))?;
        self.cum[arm] += loss / p[arm];
        Ok(())
    }
}
