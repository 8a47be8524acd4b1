//! Config-driven experiment runner: per-seed traces, aggregates, metadata
//! and an optional SVG.
//!
//! Output layout under `output`:
//! `config.ini`, `metadata.ini`, `plot.svg`, and one directory per series
//! holding `seed_<s>.csv` plus `aggregate.csv`.

mod aggregate;
mod config;
mod plot;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub use aggregate::{aggregate, aggregate_files, aggregate_points, read_points, seed_files, Aggregate, AggregateRow, TraceKind};
pub use config::{EnvSpec, ExperimentConfig, ExperimentKind, MatchingSpec, Sweep, SweepParam, TopologySpec, DEFAULT_HORIZON_CAP};
pub use plot::{plot, read_series, render_svg, PlotSpec, Series};

use crate::analysis;
use crate::coop::{run_cooperative, CoopConfig};
use crate::env::{bernoulli_linear_env, explicit_env, federated_activation_env, oco_linear_env, oco_quadratic_env, ratings_env, LossTensor, OcoProblem};
use crate::error::{Error, Result};
use crate::fed::{run_fedexp3, FedConfig};
use crate::graph::{build_topology, laplacian_spectrum, max_degree_gossip, sigma2, CommGraph};
use crate::matching::{greedy_bayes_and, greedy_bayes_or, superepoch_chain, write_trace_csv, AndOptions, NodePopulation, ValueFn};
use crate::oco::{run_fedoco, FedOcoConfig};
use crate::par;
use crate::trace::fmt_f64;

#[derive(Debug, Clone)]
pub struct SeriesOutput {
    pub name: String,
    pub dir: PathBuf,
    pub seed_files: Vec<PathBuf>,
    pub aggregate: Aggregate,
    pub metadata: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: Vec<SeriesOutput>,
    pub metadata_path: PathBuf,
    pub plot_path: Option<PathBuf>,
}

struct SeedResult {
    seed: u64,
    csv: String,
    meta: Vec<(String, String)>,
}

type Meta = Vec<(String, String)>;

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn csv_string(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Numeric(e.to_string()))
}

/// Runs every series of `cfg`, seeds in parallel when the `parallel`
/// feature is on; outputs do not depend on the worker count.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let variants: Vec<(String, ExperimentConfig)> = match &cfg.sweep {
        Some(sw) => sw
            .values
            .iter()
            .map(|&v| Ok((format!("-{}{}", sw.param.label(), fmt_f64(v)), cfg.with_override(sw.param, v)?)))
            .collect::<Result<_>>()?,
        None => vec![(String::new(), cfg.clone())],
    };
    std::fs::create_dir_all(&cfg.output)?;
    std::fs::write(cfg.output.join("config.ini"), cfg.to_ini_string())?;

    let mut outputs = Vec::new();
    for (suffix, c) in &variants {
        for (name, meta, results) in run_variant(c)? {
            outputs.push(write_series(&cfg.output, &format!("{name}{suffix}"), meta, results)?);
        }
    }

    let metadata_path = cfg.output.join("metadata.ini");
    let mut meta = String::new();
    let _ = writeln!(meta, "[experiment]\nkind = {}\nname = {}\nseeds = {}", cfg.kind.label(), cfg.name, cfg.seeds.len());
    for s in &outputs {
        let _ = writeln!(meta, "\n[{}]", s.name);
        for (k, v) in &s.metadata {
            let _ = writeln!(meta, "{k} = {v}");
        }
    }
    std::fs::write(&metadata_path, meta)?;

    let plot_path = if cfg.plot {
        let series: Vec<Series> = outputs
            .iter()
            .map(|s| Series { name: s.name.clone(), points: s.aggregate.rows.iter().map(|r| (r.x as f64, r.mean)).collect() })
            .collect();
        let spec = PlotSpec {
            title: cfg.name.clone(),
            x_label: outputs.first().map_or("t", |s| s.aggregate.kind.x_name()).to_string(),
            y_label: match cfg.kind {
                ExperimentKind::Chain => "regular sets".into(),
                ExperimentKind::Matching => "cumulative regret".into(),
                _ => "average regret".into(),
            },
            ..PlotSpec::default()
        };
        let path = cfg.output.join("plot.svg");
        std::fs::write(&path, render_svg(&series, &spec)?)?;
        Some(path)
    } else {
        None
    };
    Ok(RunOutput { series: outputs, metadata_path, plot_path })
}

fn write_series(root: &Path, name: &str, mut meta: Meta, results: Vec<SeedResult>) -> Result<SeriesOutput> {
    let dir = root.join(name);
    std::fs::create_dir_all(&dir)?;
    let mut files = Vec::with_capacity(results.len());
    for r in &results {
        let path = dir.join(format!("seed_{}.csv", r.seed));
        std::fs::write(&path, &r.csv)?;
        files.push(path);
    }
    let agg = aggregate_files(&files)?;
    agg.save(&dir.join("aggregate.csv"))?;
    if let Some(first) = results.first() {
        meta.extend(first.meta.iter().cloned());
    }
    if let Some(last) = agg.rows.last() {
        meta.push(kv("final_mean", fmt_f64(last.mean)));
        meta.push(kv("final_std", fmt_f64(last.std)));
    }
    meta.push(kv("count", agg.count));
    Ok(SeriesOutput { name: name.to_string(), dir, seed_files: files, aggregate: agg, metadata: meta })
}

fn graph_of(cfg: &ExperimentConfig) -> Result<CommGraph> {
    let t = cfg.topology.as_ref().ok_or_else(|| Error::config("topology", "missing section"))?;
    build_topology(&t.topology, t.delay, t.seed)
}

fn graph_meta(g: &CommGraph) -> Meta {
    let spec = laplacian_spectrum(g);
    vec![
        kv("agents", g.n_agents()),
        kv("edges", g.n_edges()),
        kv("delay", g.edge_delay()),
        kv("algebraic_connectivity", fmt_f64(spec.algebraic_connectivity)),
    ]
}

fn bandit_env(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<LossTensor> {
    let t = cfg.horizon;
    match &cfg.env {
        EnvSpec::Bernoulli { arms } => bernoulli_linear_env(n, *arms, t, seed),
        EnvSpec::Activation { arms } => federated_activation_env(n, *arms, t, seed),
        EnvSpec::Ratings { path, arms } => ratings_env(path, n, *arms, Some(t)),
        EnvSpec::Explicit { path } => explicit_env(path),
        _ => Err(Error::config("env.kind", "not a bandit environment")),
    }
}

fn oco_problem(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<OcoProblem> {
    match &cfg.env {
        EnvSpec::OcoLinear { arms } => oco_linear_env(*arms, n, cfg.horizon, seed),
        EnvSpec::OcoQuadratic { dim } => oco_quadratic_env(*dim, n, cfg.horizon, seed),
        _ => Err(Error::config("env.kind", "not an OCO environment")),
    }
}

fn collect(seeds: &[u64], f: impl Fn(u64) -> Result<(String, Meta)> + Sync + Send) -> Result<Vec<SeedResult>> {
    par::map(seeds, |&s| f(s).map(|(csv, meta)| SeedResult { seed: s, csv, meta })).into_iter().collect()
}

fn run_variant(cfg: &ExperimentConfig) -> Result<Vec<(String, Meta, Vec<SeedResult>)>> {
    let mut out = Vec::new();
    match cfg.kind {
        ExperimentKind::Coop => {
            let g = graph_of(cfg)?;
            for &alg in &cfg.algorithms {
                let results = collect(&cfg.seeds, |seed| {
                    let env = bandit_env(cfg, g.n_agents(), seed)?;
                    let mut cc = CoopConfig::new(alg, cfg.horizon, seed);
                    cc.stride = cfg.stride;
                    cc.eta_override = cfg.eta;
                    cc.cover_radius = cfg.cover_radius;
                    let run = run_cooperative(&cc, &g, &env)?;
                    Ok((run.trace.to_csv_string(), run.metadata))
                })?;
                out.push((alg.label().to_string(), graph_meta(&g), results));
            }
        }
        ExperimentKind::FedExp3 => {
            let g = graph_of(cfg)?;
            let w = max_degree_gossip(&g);
            let s2 = sigma2(&w);
            let results = collect(&cfg.seeds, |seed| {
                let env = bandit_env(cfg, g.n_agents(), seed)?;
                let run = run_fedexp3(&FedConfig { horizon: cfg.horizon, seed, stride: cfg.stride }, &w, s2, &env)?;
                Ok((run.trace.to_csv_string(), run.metadata()))
            })?;
            let mut meta = graph_meta(&g);
            meta.push(kv("spectral_factor", fmt_f64((1.0 - s2).powf(-1.0 / 3.0))));
            let k = match cfg.env {
                EnvSpec::Activation { arms } | EnvSpec::Bernoulli { arms } | EnvSpec::Ratings { arms, .. } => Some(arms),
                _ => None,
            };
            if let Some(k) = k {
                meta.push(kv("regret_bound", fmt_f64(analysis::fedexp3_regret_bound(k, cfg.horizon, s2, g.n_agents())?)));
            }
            out.push(("fedexp3".to_string(), meta, results));
        }
        ExperimentKind::FedOco => {
            let g = graph_of(cfg)?;
            let results = collect(&cfg.seeds, |seed| {
                let problem = oco_problem(cfg, g.n_agents(), seed)?;
                let run = run_fedoco(&FedOcoConfig { alpha: cfg.alpha, horizon: cfg.horizon, seed, stride: cfg.stride }, &problem, &g)?;
                Ok((run.trace.to_csv_string(), run.metadata()))
            })?;
            out.push(("fedoco".to_string(), graph_meta(&g), results));
        }
        ExperimentKind::Matching => {
            let m = cfg.matching.as_ref().ok_or_else(|| Error::config("matching", "missing section"))?;
            for &f in &m.values {
                let results = collect(&cfg.seeds, |seed| {
                    let pop = NodePopulation::sample(m.n, m.p, seed)?;
                    let (rows, meta) = match f {
                        ValueFn::Or => {
                            let r = greedy_bayes_or(&pop, seed)?;
                            let meta = vec![kv("tau", r.tau), kv("total_regret", r.total_regret), kv("max_rematch", r.max_rematch)];
                            (r.rows, meta)
                        }
                        ValueFn::And => {
                            let r = greedy_bayes_and(&pop, seed, AndOptions { record_rows: true, instrument: false })?;
                            let meta = vec![kv("tau", r.tau), kv("total_regret", r.total_regret), kv("max_rematch", r.max_rematch)];
                            (r.rows, meta)
                        }
                    };
                    Ok((csv_string(|b| write_trace_csv(&rows, b))?, meta))
                })?;
                let (label, bound) = match f {
                    ValueFn::Or => ("or", analysis::or_asymptotic_regret(m.n, m.p)),
                    ValueFn::And => ("and", analysis::and_regret_bound(m.n, m.p, m.c)?),
                };
                let meta = vec![
                    kv("n", m.n),
                    kv("p", fmt_f64(m.p)),
                    kv("reference_regret", fmt_f64(bound)),
                    kv("random_matching_regret", fmt_f64(analysis::random_matching_regret(m.n, m.p, f))),
                ];
                out.push((label.to_string(), meta, results));
            }
        }
        ExperimentKind::Chain => {
            let m = cfg.matching.as_ref().ok_or_else(|| Error::config("matching", "missing section"))?;
            let results = collect(&cfg.seeds, |seed| {
                let path = superepoch_chain(m.n as u64, m.p, seed)?;
                let mut s = String::from("s,x,y\n");
                for (i, st) in path.iter().enumerate() {
                    let _ = writeln!(s, "{i},{},{}", st.x, st.y);
                }
                Ok((s, vec![kv("epochs", path.len() - 1)]))
            })?;
            out.push(("chain".to_string(), vec![kv("n", m.n), kv("p", fmt_f64(m.p))], results));
        }
    }
    Ok(out)
}
