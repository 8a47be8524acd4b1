use std::path::Path;

use maclab::env::*;
use maclab::policy::{run_single_agent, Exp3, TsallisInf};
use proptest::prelude::*;

#[test]
fn replaying_with_another_policy_sees_identical_losses() {
    let env = bernoulli_linear_env(1, 6, 400, 17).unwrap();
    let before: Vec<Vec<f64>> = (0..400).map(|t| env.round(t)).collect();
    run_single_agent(&mut Exp3::new(6, 400).unwrap(), &env, 1).unwrap();
    run_single_agent(&mut TsallisInf::new(6).unwrap(), &env, 2).unwrap();
    for (t, row) in before.iter().enumerate() {
        let again = env.round(t);
        assert_eq!(row.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), again.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
    }
    // point reads in reverse order agree with row reads
    for t in (0..400).rev().step_by(37) {
        for i in (0..6).rev() {
            assert_eq!(env.loss(t, 0, i).to_bits(), before[t][i].to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tensors_stay_in_unit_range(n in 1usize..5, k in 2usize..8, t in 1usize..60, seed in any::<u64>()) {
        for env in [bernoulli_linear_env(n, k, t, seed).unwrap(), federated_activation_env(2 * n, k, t, seed).unwrap()] {
            let dense = env.materialize();
            prop_assert_eq!(dense.n_agents(), env.n_agents());
            for s in 0..t {
                let row = dense.round(s);
                prop_assert_eq!(&row, &env.round(s));
                prop_assert!(row.iter().all(|x| (0.0..=1.0).contains(x)));
            }
        }
    }

    #[test]
    fn tensor_text_round_trip(n in 1usize..4, k in 2usize..5, t in 1usize..20, seed in any::<u64>()) {
        let env = bernoulli_linear_env(n, k, t, seed).unwrap().materialize();
        let back = parse_tensor(&format_tensor(&env), Path::new("mem")).unwrap();
        for s in 0..t {
            prop_assert_eq!(back.round(s), env.round(s));
        }
    }

    #[test]
    fn ratings_bucketing_has_one_value_per_rating(counts in prop::collection::vec(1usize..6, 4), horizon in 6usize..40) {
        // 2 agents x 2 arms, counts[v*2+i] ratings each, all distinct
        let mut rows = Vec::new();
        let mut ts = 0;
        for (cell, &m) in counts.iter().enumerate() {
            for j in 0..m {
                let rating = 0.5 + 0.5 * ((j + cell) % 10) as f64;
                rows.push(format!("{},{},{},{}", cell / 2, cell % 2, rating, ts));
                ts += 1;
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        std::fs::write(&path, rows.join("\n")).unwrap();
        let env = ratings_env(&path, 2, 2, Some(horizon)).unwrap();
        for (cell, &m) in counts.iter().enumerate() {
            let mut vals: Vec<u64> = (0..horizon).map(|t| env.loss(t, cell / 2, cell % 2).to_bits()).collect();
            vals.dedup();
            prop_assert!(vals.len() <= m);
            if horizon >= m {
                prop_assert_eq!(vals.len(), m);
            }
        }
    }
}

#[test]
fn ratings_errors_carry_line_numbers() {
    let err = parse_ratings("0,0,3.0,1\n0,1,4.0,0\n", Path::new("x.csv")).unwrap_err();
    assert!(matches!(err, maclab::error::Error::Parse { line: 2, .. }), "{err:?}");
}

#[test]
fn oco_sets_and_subgradients() {
    let p = oco_linear_env(5, 3, 50, 4).unwrap();
    let q = oco_quadratic_env(3, 3, 50, 4).unwrap();
    for prob in [&p, &q] {
        let x = vec![1.0 / prob.dim() as f64; prob.dim()];
        for t in 0..50 {
            for v in 0..3 {
                let g = prob.gradient(t, v, &x);
                assert!(prob.dual_norm(&g) <= prob.lipschitz + 1e-12);
            }
        }
    }
    let b = project_ball(&[3.0, 4.0], 1.0);
    assert!((b[0] - 0.6).abs() < 1e-15 && (b[1] - 0.8).abs() < 1e-15);
}
