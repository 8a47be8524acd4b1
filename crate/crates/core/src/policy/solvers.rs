use super::{SimplexPoint, TOLERANCES};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TsallisSolution {
    pub p: SimplexPoint,
    /// Multiplier on the original (unshifted) losses.
    pub lambda: f64,
}

/// Solves `p_i = 1/(eta L_i + lambda)^2`, `sum p = 1` for the multiplier by
/// safeguarded Newton on the decreasing map `lambda -> sum p`.
pub fn tsallis_ftrl_solve(losses: &[f64], eta: f64) -> Result<TsallisSolution> {
    let k = losses.len();
    if k == 0 || !(eta > 0.0) || losses.iter().any(|l| !l.is_finite()) {
        return Err(Error::invalid("Tsallis solve needs K >= 1, eta > 0 and finite losses"));
    }
    let lmin = losses.iter().copied().fold(f64::INFINITY, f64::min);
    if losses.iter().all(|&l| l == lmin) {
        return Ok(TsallisSolution { p: SimplexPoint::uniform(k), lambda: (k as f64).sqrt() - eta * lmin });
    }
    let a: Vec<f64> = losses.iter().map(|l| eta * (l - lmin)).collect();
    let sum = |lam: f64| -> (f64, f64) {
        a.iter().fold((0.0, 0.0), |(s, d), &ai| {
            let x = 1.0 / (ai + lam);
            (s + x * x, d - 2.0 * x * x * x)
        })
    };
    // half the contract tolerance leaves room for summation-order rounding
    let tol = 0.5 * TOLERANCES.simplex_sum;
    // sum >= 1 as lambda -> 0+ (the minimal coordinate alone blows up); sum <= 1 at sqrt(K)
    let (mut lo, mut hi) = (0.0, (k as f64).sqrt());
    let mut lam = hi;
    for _ in 0..TOLERANCES.max_iterations {
        let (s, ds) = sum(lam);
        if (s - 1.0).abs() <= tol {
            let p = a.iter().map(|ai| {
                let x = 1.0 / (ai + lam);
                x * x
            }).collect();
            return Ok(TsallisSolution { p: SimplexPoint::new(p)?, lambda: lam - eta * lmin });
        }
        if s > 1.0 {
            lo = lam;
        } else {
            hi = lam;
        }
        let newton = lam - (s - 1.0) / ds;
        lam = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Err(Error::Numeric(format!("Tsallis multiplier did not converge (eta = {eta})")))
}

/// `softmax(-eta z)` with max-subtraction.
pub fn entropic_argmin(z: &[f64], eta: f64) -> SimplexPoint {
    let zmin = z.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = z.iter().map(|&zi| (-eta * (zi - zmin)).exp()).collect();
    let s: f64 = w.iter().sum();
    SimplexPoint(w.into_iter().map(|x| x / s).collect())
}

/// Stationarity in `s = log p`: `h(s) = -exp(-s/2)/eta + (s+1)/zeta` is
/// concave and increasing; returns the root of `h(s) = c`.
fn hybrid_coordinate(c: f64, eta: f64, zeta: f64) -> Result<f64> {
    let h = |s: f64| -(-s / 2.0).exp() / eta + (s + 1.0) / zeta;
    let dh = |s: f64| (-s / 2.0).exp() / (2.0 * eta) + 1.0 / zeta;
    let (mut lo, mut hi) = (-1.0, 1.0);
    let mut step = 1.0;
    while h(lo) > c {
        step *= 2.0;
        lo -= step;
        if step > 1e6 {
            return Err(Error::Numeric("hybrid inner bracket failed".into()));
        }
    }
    step = 1.0;
    while h(hi) < c {
        step *= 2.0;
        hi += step;
        if step > 1e12 {
            return Err(Error::Numeric("hybrid inner bracket failed".into()));
        }
    }
    // start from the left end: Newton on a concave increasing map then moves monotonically right
    let mut s = lo;
    for _ in 0..TOLERANCES.max_iterations {
        let f = h(s) - c;
        if f.abs() <= 1e-13 * (1.0 + c.abs()) {
            return Ok(s);
        }
        if f < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let next = s - f / dh(s);
        let next = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if next == s {
            return Ok(s);
        }
        s = next;
    }
    Ok(s)
}

/// Minimises `<p, L> - (2/eta) sum sqrt(p) + (1/zeta) sum p log p` over the simplex.
pub fn hybrid_ftrl_solve(losses: &[f64], eta: f64, zeta: f64) -> Result<SimplexPoint> {
    let k = losses.len();
    if k == 0 || !(eta > 0.0) || !(zeta > 0.0) || losses.iter().any(|l| !l.is_finite()) {
        return Err(Error::invalid("hybrid solve needs K >= 1, eta, zeta > 0 and finite losses"));
    }
    let lmin = losses.iter().copied().fold(f64::INFINITY, f64::min);
    if losses.iter().all(|&l| l == lmin) {
        return Ok(SimplexPoint::uniform(k));
    }
    let shifted: Vec<f64> = losses.iter().map(|l| l - lmin).collect();
    let h_prime = |s: f64| (-s / 2.0).exp() / (2.0 * eta) + 1.0 / zeta;
    let eval = |lam: f64| -> Result<(Vec<f64>, f64, f64)> {
        let mut s = Vec::with_capacity(k);
        let (mut total, mut deriv) = (0.0, 0.0);
        for &l in &shifted {
            let si = hybrid_coordinate(-(l + lam), eta, zeta)?;
            let p = si.exp();
            total += p;
            deriv -= p / h_prime(si);
            s.push(si);
        }
        Ok((s, total, deriv))
    };
    // p_i <= 1 for the smallest loss needs h(0) >= -lambda
    let h0 = -1.0 / eta + 1.0 / zeta;
    let mut hi = (-h0).max(0.0) + 1.0;
    let mut step = 1.0;
    while eval(hi)?.1 > 1.0 {
        hi += step;
        step *= 2.0;
    }
    let mut step = 1.0;
    let mut lo = hi - step;
    while eval(lo)?.1 < 1.0 {
        step *= 2.0;
        lo = hi - step;
    }
    let mut lam = 0.5 * (lo + hi);
    for _ in 0..TOLERANCES.max_iterations {
        let (s, total, deriv) = eval(lam)?;
        if (total - 1.0).abs() <= 0.5 * TOLERANCES.simplex_sum {
            let p: Vec<f64> = s.iter().map(|x| x.exp()).collect();
            if hybrid_kkt_residual(&p, &shifted, eta, zeta, lam) > TOLERANCES.kkt {
                break;
            }
            return SimplexPoint::new(p);
        }
        if total > 1.0 {
            lo = lam;
        } else {
            hi = lam;
        }
        let next = lam - (total - 1.0) / deriv;
        lam = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    Err(Error::Numeric(format!("hybrid FTRL did not converge (eta = {eta}, zeta = {zeta})")))
}

/// Largest violation among the simplex constraint and the per-coordinate
/// stationarity conditions.
pub fn hybrid_kkt_residual(p: &[f64], losses: &[f64], eta: f64, zeta: f64, lambda: f64) -> f64 {
    let sum_res = (p.iter().sum::<f64>() - 1.0).abs();
    p.iter().zip(losses).fold(sum_res, |m, (&pi, &l)| {
        let r = l - 1.0 / (eta * pi.sqrt()) + (pi.ln() + 1.0) / zeta + lambda;
        // scale by the coordinate's slope so that tiny probabilities are not over-weighted
        let slope = 1.0 / (2.0 * eta * pi.sqrt()) + 1.0 / zeta;
        m.max(r.abs() / slope)
    })
}
