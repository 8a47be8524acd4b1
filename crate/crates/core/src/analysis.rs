//! Closed-form regret formulas and reference curves.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matching::{posterior_pi, ValueFn};
use crate::trace::fmt_f64;

pub use crate::fed::fedexp3_regret_bound;

/// Default constant in the AND bound; must exceed `16/(sqrt 2 - 1)`.
pub const AND_BOUND_C: f64 = 39.0;

/// `(1 - (1-p)^2) / (8 p^2) * min(p, 1-p)^4 * n^2`; zero at `p` in {0, 1}.
pub fn or_asymptotic_regret(n: usize, p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    let m = p.min(1.0 - p);
    let nf = n as f64;
    (1.0 - (1.0 - p) * (1.0 - p)) / (8.0 * p * p) * m.powi(4) * nf * nf
}

/// The three coefficients of the AND bound, before scaling by `n^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndBoundTerms {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl AndBoundTerms {
    pub fn total(&self, n: usize) -> f64 {
        (self.a + self.b + self.c) * (n as f64).powi(2)
    }
}

pub fn and_bound_terms(n: usize, p: f64, c: f64) -> Result<AndBoundTerms> {
    if n < 2 {
        return Err(Error::invalid("and_regret_bound needs n >= 2"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("prior {p} outside [0,1]")));
    }
    let levels = n.ilog2() as usize;
    let nf = n as f64;
    let ps: Vec<f64> = (0..=levels).map(|s| posterior_pi(1usize << s, p)).collect();
    let qs: Vec<f64> = ps.iter().map(|x| 1.0 - x * x).collect();
    let prod = |from: usize, to: usize, sq: bool| -> f64 {
        (from..to).map(|j| if sq { qs[j] * qs[j] } else { qs[j] }).product()
    };
    let mut a = 0.0;
    let mut b = 0.0;
    for s in 1..=levels {
        let w = (1.0 - 0.5 * ps[s]) * (1.0 - 0.5 * ps[s] * ps[s]) * ps[s];
        let inner: f64 = (0..s)
            .map(|i| (1u64 << (i + 1)) as f64 * prod(0, i + 1, false) * prod(i + 1, s, true))
            .sum();
        a += w * (prod(0, s, true) + inner / nf);
        b += (1u64 << (s + 1)) as f64 * ps[s] * prod(0, s, false);
    }
    let c_term = if p == 0.0 { 4.0 / 3.0 } else { (c / (nf * p)).min(4.0 / 3.0) };
    Ok(AndBoundTerms { a: a / 4.0, b: b / nf, c: c_term })
}

/// `(a + b + c) n^2` for Least-Size-Merge.
pub fn and_regret_bound(n: usize, p: f64, c: f64) -> Result<f64> {
    Ok(and_bound_terms(n, p, c)?.total(n))
}

/// Leading term of the regret of a uniformly random matching.
pub fn random_matching_regret(n: usize, p: f64, f: ValueFn) -> f64 {
    let nf = n as f64;
    match f {
        ValueFn::Or => 0.5 * p.min(1.0 - p).powi(2) * nf,
        ValueFn::And => 0.5 * p * (1.0 - p) * nf,
    }
}

/// Cap on stopping time used in the AND sweep: `c * min(n/p, n^2)`.
pub fn and_tau_cap(n: usize, p: f64, c: f64) -> f64 {
    let nf = n as f64;
    if p == 0.0 {
        return c * nf * nf;
    }
    c * (nf / p).min(nf * nf)
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Named reference curve `x -> value`.
#[derive(Clone)]
pub struct BoundCurve {
    pub name: String,
    pub params: Vec<(String, f64)>,
    eval: Evaluator,
}

impl std::fmt::Debug for BoundCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundCurve").field("name", &self.name).field("params", &self.params).finish()
    }
}

impl BoundCurve {
    pub fn new(name: impl Into<String>, params: Vec<(String, f64)>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        BoundCurve { name: name.into(), params, eval: Arc::new(eval) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn sample(&self, xs: &[f64]) -> Vec<(f64, f64)> {
        xs.iter().map(|&x| (x, self.eval(x))).collect()
    }

    pub fn write_csv<W: Write>(&self, xs: &[f64], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "value"])?;
        for (x, v) in self.sample(xs) {
            w.write_record([fmt_f64(x), fmt_f64(v)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, xs: &[f64], path: &Path) -> Result<()> {
        self.write_csv(xs, std::fs::File::create(path)?)
    }

    /// OR asymptotic regret as a function of `n`.
    pub fn or_regret(p: f64) -> Self {
        BoundCurve::new("or_asymptotic", vec![("p".into(), p)], move |n| or_asymptotic_regret(1, p) * n * n)
    }

    /// AND bound as a function of `p` at fixed `n`.
    pub fn and_bound(n: usize, c: f64) -> Self {
        BoundCurve::new("and_bound", vec![("n".into(), n as f64), ("c".into(), c)], move |p| {
            and_regret_bound(n, p, c).unwrap_or(f64::NAN)
        })
    }

    /// FedExp3 upper bound as a function of `T`.
    pub fn fedexp3(k: usize, sigma2: f64, n_agents: usize) -> Self {
        BoundCurve::new(
            "fedexp3_bound",
            vec![("K".into(), k as f64), ("sigma2".into(), sigma2), ("N".into(), n_agents as f64)],
            move |t| fedexp3_regret_bound(k, (t.max(1.0)) as usize, sigma2, n_agents).unwrap_or(f64::NAN),
        )
    }

    /// Unnormalised cooperative lower-bound shape
    /// `max{min{T, sqrt(KT/|N(v)|)}, sqrt(d T ln K)}` in `T`.
    pub fn coop_lower(k: usize, neighborhood: usize, delay: usize) -> Self {
        let (kf, m, d) = (k as f64, neighborhood.max(1) as f64, delay as f64);
        BoundCurve::new(
            "coop_lower",
            vec![("K".into(), kf), ("neighborhood".into(), m), ("d".into(), d)],
            move |t| t.min((kf * t / m).sqrt()).max((d * t * kf.ln()).sqrt()),
        )
    }

    /// Unnormalised federated lower-bound shape
    /// `max{sqrt(KT/(1+d_v)), ((1+d_max)/lambda)^(1/4) sqrt(T ln K)}` in `T`.
    pub fn fed_lower(k: usize, degree: usize, max_degree: usize, algebraic_connectivity: f64) -> Self {
        let kf = k as f64;
        let spread = ((1.0 + max_degree as f64) / algebraic_connectivity).powf(0.25);
        let dv = degree as f64;
        BoundCurve::new(
            "fed_lower",
            vec![("K".into(), kf), ("degree".into(), dv), ("lambda".into(), algebraic_connectivity)],
            move |t| (kf * t / (1.0 + dv)).sqrt().max(spread * (t * kf.ln()).sqrt()),
        )
    }
}
