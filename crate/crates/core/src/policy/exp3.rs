use super::{check_loss, BanditPolicy, SimplexPoint};
use crate::error::{Error, Result};

/// `min{1, sqrt(K ln K / ((e - 1) T))}`.
pub fn exp3_gamma(k: usize, horizon: usize) -> f64 {
    let k = k as f64;
    (k * k.ln() / ((std::f64::consts::E - 1.0) * horizon as f64)).sqrt().min(1.0)
}

/// Exponential weights with uniform exploration mix; weights kept in log form.
#[derive(Debug, Clone)]
pub struct Exp3 {
    gamma: f64,
    log_w: Vec<f64>,
    last: Option<SimplexPoint>,
}

impl Exp3 {
    pub fn new(k: usize, horizon: usize) -> Result<Self> {
        if k < 2 || horizon == 0 {
            return Err(Error::invalid(format!("Exp3 needs K >= 2 and T >= 1, got K={k}, T={horizon}")));
        }
        Ok(Self::with_gamma(k, exp3_gamma(k, horizon)))
    }

    pub fn with_gamma(k: usize, gamma: f64) -> Self {
        Exp3 { gamma, log_w: vec![0.0; k], last: None }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_arms(&self) -> usize {
        self.log_w.len()
    }

    /// `(1 - gamma) w / sum w + gamma / K`.
    pub fn probabilities(&self) -> SimplexPoint {
        let k = self.log_w.len() as f64;
        let m = self.log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = self.log_w.iter().map(|x| (x - m).exp()).collect();
        let s: f64 = w.iter().sum();
        SimplexPoint(w.iter().map(|x| (1.0 - self.gamma) * x / s + self.gamma / k).collect())
    }

    /// Applies `w_i <- w_i exp(-gamma est_i / K)` for a whole estimate vector.
    pub fn update_estimate(&mut self, estimate: &[f64]) {
        let k = self.log_w.len() as f64;
        for (lw, e) in self.log_w.iter_mut().zip(estimate) {
            *lw -= self.gamma * e / k;
        }
    }
}

impl BanditPolicy for Exp3 {
    fn distribution(&mut self) -> Result<SimplexPoint> {
        let p = self.probabilities();
        self.last = Some(p.clone());
        Ok(p)
    }

    fn observe(&mut self, arm: usize, loss: f64) -> Result<()> {
        check_loss(loss)?;
        let p = self.last.take().ok_or_else(|| Error::Protocol("observe before distribution".into()))?;
        let k = self.log_w.len() as f64;
        self.log_w[arm] -= self.gamma * (loss / p[arm]) / k;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_value() {
        let g = exp3_gamma(10, 1000);
        let expected = (10.0 * 10f64.ln() / ((std::f64::consts::E - 1.0) * 1000.0)).sqrt();
        assert!((g - expected).abs() < 1e-15);
        assert!((g - 0.1158).abs() < 5e-5);
        assert_eq!(exp3_gamma(10, 1), 1.0);
    }

    #[test]
    fn uniform_start_and_zero_losses() {
        let mut e = Exp3::new(4, 100).unwrap();
        for _ in 0..50 {
            let p = e.distribution().unwrap();
            assert!(p.probs().iter().all(|&x| (x - 0.25).abs() < 1e-15));
            e.observe(2, 0.0).unwrap();
        }
    }

    #[test]
    fn loss_lowers_weight() {
        let mut e = Exp3::new(3, 100).unwrap();
        e.distribution().unwrap();
        e.observe(0, 1.0).unwrap();
        let p = e.probabilities();
        assert!(p[0] < p[1] && (p[1] - p[2]).abs() < 1e-15);
        assert!(e.distribution().is_ok() && e.observe(0, 1.5).is_err());
    }
}
