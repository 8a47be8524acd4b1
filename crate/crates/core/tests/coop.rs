use std::sync::Arc;

use maclab::coop::*;
use maclab::env::bernoulli_linear_env;
use maclab::graph::{build_topology, CommGraph, Topology};
use maclab::policy::is_simplex;
use maclab::rng;

fn star(n: usize, d: usize) -> CommGraph {
    build_topology(&Topology::Star { n }, d, 0).unwrap()
}

#[test]
fn copiers_replay_center_distribution_bit_for_bit() {
    // path of 7: centers at distance up to 2 from their members
    let g = CommGraph::from_edges(7, (1..7).map(|v| (v - 1, v)), 2).unwrap();
    let env = bernoulli_linear_env(7, 5, 300, 2).unwrap();
    let mut sim = CoopSimulation::new(CoopConfig::new(CoopAlgorithm::Cftrl, 300, 9), &g, &env).unwrap();
    let a = sim.assignment().unwrap().clone();
    let mut hist: Vec<Vec<Arc<Vec<f64>>>> = Vec::new();
    while !sim.is_done() {
        hist.push(sim.step().unwrap().dists);
    }
    for v in 0..7 {
        let lag = a.hop_distance[v] * g.edge_delay();
        let c = a.center_of[v];
        for t in lag + 1..=300 {
            let mine: Vec<u64> = hist[t - 1][v].iter().map(|x| x.to_bits()).collect();
            let theirs: Vec<u64> = hist[t - 1 - lag][c].iter().map(|x| x.to_bits()).collect();
            assert_eq!(mine, theirs, "agent {v} round {t}");
        }
    }
}

#[test]
fn regret_comes_from_environment_alone() {
    let g = build_topology(&Topology::RRegular { n: 6, r: 3 }, 1, 0).unwrap();
    let env = bernoulli_linear_env(6, 4, 200, 8).unwrap();
    for alg in CoopAlgorithm::ALL {
        let mut sim = CoopSimulation::new(CoopConfig::new(alg, 200, 3), &g, &env).unwrap();
        let mut incurred = [0.0; 6];
        let mut per_arm = vec![vec![0.0; 4]; 6];
        while !sim.is_done() {
            let rep = sim.step().unwrap();
            let row = env.round(rep.t - 1);
            for v in 0..6 {
                assert!(is_simplex(&rep.dists[v], 1e-12));
                incurred[v] += row[v * 4 + rep.arms[v]];
                for i in 0..4 {
                    per_arm[v][i] += row[v * 4 + i];
                }
            }
        }
        let run = sim.finish().unwrap();
        for v in 0..6 {
            let best = per_arm[v].iter().copied().fold(f64::INFINITY, f64::min);
            assert!((run.trace.final_regret()[v] - (incurred[v] - best)).abs() < 1e-9, "{alg:?}");
        }
    }
}

#[test]
fn collaborative_estimate_unbiased_at_frozen_state() {
    let dists: Vec<Arc<Vec<f64>>> = vec![
        Arc::new(vec![0.6, 0.3, 0.08, 0.02]),
        Arc::new(vec![0.1, 0.1, 0.1, 0.7]),
        Arc::new(vec![0.25; 4]),
    ];
    let loss = [0.3, 0.8, 0.5, 0.1];
    let mut r = rng::seeded(21);
    let draws = 100_000;
    let (mut s1, mut s2) = ([0.0; 4], [0.0; 4]);
    for _ in 0..draws {
        let msgs: Vec<AgentMessage> = dists
            .iter()
            .enumerate()
            .map(|(v, p)| {
                let arm = rng::sample_index(p, &mut r);
                AgentMessage { sender: v, round: 1, arm, loss: loss[arm], dist: p.clone() }
            })
            .collect();
        let refs: Vec<&AgentMessage> = msgs.iter().collect();
        let (est, floored) = collaborative_estimate(4, &refs);
        assert_eq!(floored, 0);
        for i in 0..4 {
            s1[i] += est[i];
            s2[i] += est[i] * est[i];
        }
    }
    let n = draws as f64;
    for i in 0..4 {
        let mean = s1[i] / n;
        let se = ((s2[i] / n - mean * mean) / n).sqrt();
        assert!((mean - loss[i]).abs() <= 3.0 * se, "arm {i}");
        let q = neighborhood_weight(dists.iter().map(|d| d.as_slice()), i);
        assert!((s2[i] / n - loss[i] * loss[i] / q).abs() / (loss[i] * loss[i] / q) < 0.05);
    }
}

#[test]
fn runs_are_deterministic() {
    let g = star(5, 2);
    let env = bernoulli_linear_env(5, 6, 150, 4).unwrap();
    for alg in CoopAlgorithm::ALL {
        let cfg = CoopConfig::new(alg, 150, 77);
        let a = run_cooperative(&cfg, &g, &env).unwrap().trace.to_csv_string();
        let b = run_cooperative(&cfg, &g, &env).unwrap().trace.to_csv_string();
        assert_eq!(a, b);
    }
}

#[test]
fn algorithm_labels_round_trip() {
    for alg in CoopAlgorithm::ALL {
        assert_eq!(CoopAlgorithm::parse(alg.label()), Some(alg));
    }
}
