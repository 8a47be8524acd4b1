use maclab::env::federated_activation_env;
use maclab::fed::*;
use maclab::graph::{build_topology, max_degree_gossip, sigma2, Topology};
use maclab::policy::{entropic_argmin, importance_weighted_estimate, is_simplex};

fn grid(rows: usize, cols: usize) -> maclab::graph::CommGraph {
    build_topology(&Topology::Grid { rows, cols }, 1, 0).unwrap()
}

#[test]
fn conservation_lipschitz_and_disagreement() {
    let g = grid(3, 4);
    let w = max_degree_gossip(&g);
    let s2 = sigma2(&w);
    let (n, k, horizon) = (12, 6, 800);
    let env = federated_activation_env(n, k, horizon, 5).unwrap();
    let mut sim = FedSimulation::new(&FedConfig { horizon, seed: 3, stride: 100 }, &w, s2, &env).unwrap();
    let bar = |z: &[Vec<f64>]| -> Vec<f64> { (0..k).map(|i| z.iter().map(|zv| zv[i]).sum::<f64>() / n as f64).collect() };
    let (gamma_t, c_w) = (sim.schedules().gamma(horizon), sim.schedules().c_w);
    let mut worst = 0.0f64;
    while !sim.is_done() {
        let before = bar(sim.z());
        let rep = sim.step().unwrap();
        for p in &rep.dists {
            assert!(is_simplex(p, 1e-12));
        }
        let after = bar(sim.z());
        for i in 0..k {
            let avg_g: f64 = rep.estimates.iter().map(|g| g[i]).sum::<f64>() / n as f64;
            assert!((after[i] - before[i] - avg_g).abs() < 1e-9);
        }
        let eta = sim.schedules().eta(rep.t);
        if rep.t.is_multiple_of(50) {
            let y = entropic_argmin(&after, eta);
            for v in 0..n {
                let dev = sim.z()[v].iter().zip(&after).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let l1: f64 = sim.x()[v].iter().zip(y.probs()).map(|(a, b)| (a - b).abs()).sum();
                assert!(l1 <= eta * dev * k as f64 + 1e-6);
            }
        }
        for zv in sim.z() {
            worst = worst.max(zv.iter().zip(&after).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
    }
    assert!(worst <= k as f64 / gamma_t * c_w, "{worst}");
}

#[test]
fn estimator_unbiased_at_frozen_state() {
    use maclab::rng;
    let p = [0.4, 0.35, 0.2, 0.05];
    let loss = [1.0, 0.0, 1.0, 1.0];
    let mut r = rng::seeded(9);
    let draws = 100_000;
    let mut s = [0.0; 4];
    let mut sq = [0.0; 4];
    for _ in 0..draws {
        let a = rng::sample_index(&p, &mut r);
        let g = importance_weighted_estimate(4, a, loss[a], p[a]).unwrap();
        for i in 0..4 {
            s[i] += g[i];
            sq[i] += g[i] * g[i];
        }
    }
    for i in 0..4 {
        let m = s[i] / draws as f64;
        let se = ((sq[i] / draws as f64 - m * m) / draws as f64).sqrt();
        assert!((m - loss[i]).abs() <= 3.0 * se + 1e-12);
    }
}

#[test]
fn schedules_and_bound() {
    let s = FedSchedules::new(20, 3000, 36, 0.5).unwrap();
    assert!(s.gamma(1) <= 1.0 && s.gamma(3000) <= s.gamma(1));
    assert!(FedSchedules::new(20, 3000, 36, 1.0).is_err());
    let b1 = fedexp3_regret_bound(20, 1000, 0.5, 36).unwrap();
    let b2 = fedexp3_regret_bound(20, 1000, 0.9, 36).unwrap();
    assert!(b2 > b1);
}

#[test]
fn deterministic_traces() {
    let g = grid(2, 3);
    let w = max_degree_gossip(&g);
    let env = federated_activation_env(6, 4, 200, 1).unwrap();
    let cfg = FedConfig { horizon: 200, seed: 4, stride: 20 };
    let a = run_fedexp3(&cfg, &w, sigma2(&w), &env).unwrap().trace.to_csv_string();
    let b = run_fedexp3(&cfg, &w, sigma2(&w), &env).unwrap().trace.to_csv_string();
    assert_eq!(a, b);
}
