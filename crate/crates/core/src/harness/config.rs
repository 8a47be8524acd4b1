//! INI experiment configs.
//!
//! ```text
//! [experiment]
//! kind = coop
//! seeds = 0..10
//! horizon = 3000
//! output = out/coop
//!
//! [topology]
//! kind = rregular
//! n = 3
//! r = 2
//!
//! [env]
//! kind = bernoulli
//! arms = 40
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;

use crate::coop::CoopAlgorithm;
use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::matching::ValueFn;
use crate::trace::fmt_f64;

/// Horizon allowed without `uncapped = true`.
pub const DEFAULT_HORIZON_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Coop,
    FedExp3,
    FedOco,
    Matching,
    Chain,
}

impl ExperimentKind {
    pub fn label(self) -> &'static str {
        match self {
            ExperimentKind::Coop => "coop",
            ExperimentKind::FedExp3 => "fedexp3",
            ExperimentKind::FedOco => "fedoco",
            ExperimentKind::Matching => "matching",
            ExperimentKind::Chain => "chain",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::Coop, Self::FedExp3, Self::FedOco, Self::Matching, Self::Chain]
            .into_iter()
            .find(|k| k.label() == s)
    }

    fn needs_graph(self) -> bool {
        matches!(self, Self::Coop | Self::FedExp3 | Self::FedOco)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologySpec {
    pub topology: Topology,
    pub delay: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnvSpec {
    Bernoulli { arms: usize },
    Activation { arms: usize },
    Ratings { path: PathBuf, arms: usize },
    Explicit { path: PathBuf },
    OcoLinear { arms: usize },
    OcoQuadratic { dim: usize },
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingSpec {
    pub n: usize,
    pub p: f64,
    pub values: Vec<ValueFn>,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Arms,
    Delay,
    Radius,
    Degree,
    Alpha,
    P,
    N,
}

impl SweepParam {
    pub fn label(self) -> &'static str {
        match self {
            SweepParam::Arms => "arms",
            SweepParam::Delay => "delay",
            SweepParam::Radius => "radius",
            SweepParam::Degree => "r",
            SweepParam::Alpha => "alpha",
            SweepParam::P => "p",
            SweepParam::N => "n",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        use SweepParam::*;
        [Arms, Delay, Radius, Degree, Alpha, P, N].into_iter().find(|k| k.label() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub name: String,
    pub seeds: Vec<u64>,
    pub output: PathBuf,
    pub horizon: usize,
    pub stride: usize,
    pub plot: bool,
    pub uncapped: bool,
    pub topology: Option<TopologySpec>,
    pub env: EnvSpec,
    pub algorithms: Vec<CoopAlgorithm>,
    pub eta: Option<f64>,
    pub cover_radius: usize,
    pub alpha: f64,
    pub matching: Option<MatchingSpec>,
    pub sweep: Option<Sweep>,
}

const KEYS: &[(&str, &[&str])] = &[
    ("experiment", &["kind", "name", "seeds", "output", "horizon", "stride", "plot", "uncapped"]),
    ("topology", &["kind", "n", "r", "rows", "cols", "p", "radius", "delay", "seed"]),
    ("env", &["kind", "arms", "dim", "path"]),
    ("algorithm", &["names", "eta", "cover_radius", "alpha"]),
    ("matching", &["n", "p", "value", "c"]),
    ("sweep", &["param", "values"]),
];

struct Doc<'a>(&'a Ini);

impl Doc<'_> {
    fn raw(&self, sec: &str, key: &str) -> Option<&str> {
        self.0.section(Some(sec)).and_then(|p| p.get(key)).map(str::trim)
    }

    fn opt<T: FromStr>(&self, sec: &str, key: &str) -> Result<Option<T>> {
        match self.raw(sec, key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::config(format!("{sec}.{key}"), format!("cannot parse `{s}`"))),
        }
    }

    fn req<T: FromStr>(&self, sec: &str, key: &str) -> Result<T> {
        self.opt(sec, key)?.ok_or_else(|| Error::config(format!("{sec}.{key}"), "missing"))
    }

    fn has(&self, sec: &str) -> bool {
        self.0.section(Some(sec)).is_some()
    }
}

fn parse_seeds(s: &str) -> Option<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (a < b).then(|| (a..b).collect());
    }
    s.split(',').map(|x| x.trim().parse().ok()).collect::<Option<Vec<_>>>().filter(|v| !v.is_empty())
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    s.split(',').map(|x| f(x.trim())).collect::<Option<Vec<_>>>().filter(|v| !v.is_empty())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::config("<file>", e.to_string()))?;
        for (sec, props) in ini.iter() {
            let Some(sec) = sec else {
                if let Some((k, _)) = props.iter().next() {
                    return Err(Error::config(k, "key outside any section"));
                }
                continue;
            };
            let allowed = KEYS
                .iter()
                .find(|(s, _)| *s == sec)
                .ok_or_else(|| Error::config(sec, "unknown section"))?
                .1;
            for (k, _) in props.iter() {
                if !allowed.contains(&k) {
                    return Err(Error::config(format!("{sec}.{k}"), "unknown key"));
                }
            }
        }
        let d = Doc(&ini);
        let kind_s: String = d.req("experiment", "kind")?;
        let kind = ExperimentKind::parse(&kind_s)
            .ok_or_else(|| Error::config("experiment.kind", format!("unknown kind `{kind_s}`")))?;
        let seeds_s: String = d.req("experiment", "seeds")?;
        let seeds =
            parse_seeds(&seeds_s).ok_or_else(|| Error::config("experiment.seeds", format!("bad seed list `{seeds_s}`")))?;
        let output: PathBuf = d.req::<String>("experiment", "output")?.into();
        let name = d.opt("experiment", "name")?.unwrap_or_else(|| kind.label().to_string());
        let uncapped = d.opt("experiment", "uncapped")?.unwrap_or(false);
        let plot = d.opt("experiment", "plot")?.unwrap_or(true);
        let horizon: usize = if kind.needs_graph() { d.req("experiment", "horizon")? } else { d.opt("experiment", "horizon")?.unwrap_or(0) };
        let stride = d.opt("experiment", "stride")?.unwrap_or((horizon / 100).max(1));
        if stride == 0 {
            return Err(Error::config("experiment.stride", "must be positive"));
        }

        let topology = if kind.needs_graph() { Some(parse_topology(&d)?) } else { None };
        let env = parse_env(&d, kind)?;

        let algorithms = match d.raw("algorithm", "names") {
            Some(s) => parse_list(s, CoopAlgorithm::parse)
                .ok_or_else(|| Error::config("algorithm.names", format!("bad algorithm list `{s}`")))?,
            None => CoopAlgorithm::ALL.to_vec(),
        };
        let eta = d.opt("algorithm", "eta")?;
        let cover_radius = d.opt("algorithm", "cover_radius")?.unwrap_or(crate::graph::DEFAULT_COVER_RADIUS);
        let alpha = d.opt("algorithm", "alpha")?.unwrap_or(0.5);

        let matching = if matches!(kind, ExperimentKind::Matching | ExperimentKind::Chain) {
            let values = match d.raw("matching", "value") {
                Some(s) => parse_list(s, ValueFn::parse)
                    .ok_or_else(|| Error::config("matching.value", format!("bad value function list `{s}`")))?,
                None => vec![ValueFn::Or, ValueFn::And],
            };
            Some(MatchingSpec {
                n: d.req("matching", "n")?,
                p: d.req("matching", "p")?,
                values,
                c: d.opt("matching", "c")?.unwrap_or(crate::analysis::AND_BOUND_C),
            })
        } else {
            None
        };

        let sweep = if d.has("sweep") {
            let ps: String = d.req("sweep", "param")?;
            let param = SweepParam::parse(&ps).ok_or_else(|| Error::config("sweep.param", format!("unknown `{ps}`")))?;
            let vs: String = d.req("sweep", "values")?;
            let values =
                parse_list(&vs, |x| x.parse().ok()).ok_or_else(|| Error::config("sweep.values", format!("bad list `{vs}`")))?;
            Some(Sweep { param, values })
        } else {
            None
        };

        let cfg = ExperimentConfig {
            kind,
            name,
            seeds,
            output,
            horizon,
            stride,
            plot,
            uncapped,
            topology,
            env,
            algorithms,
            eta,
            cover_radius,
            alpha,
            matching,
            sweep,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind.needs_graph() {
            if self.horizon == 0 {
                return Err(Error::config("experiment.horizon", "must be positive"));
            }
            if self.horizon > DEFAULT_HORIZON_CAP && !self.uncapped {
                return Err(Error::config(
                    "experiment.horizon",
                    format!("{} exceeds the cap {DEFAULT_HORIZON_CAP}; set uncapped = true", self.horizon),
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::config("algorithm.alpha", "must lie in [0,1]"));
        }
        if let Some(m) = &self.matching {
            if !(0.0..=1.0).contains(&m.p) {
                return Err(Error::config("matching.p", "must lie in [0,1]"));
            }
            if m.n < 2 || (self.kind == ExperimentKind::Matching && m.n % 2 != 0) {
                return Err(Error::config("matching.n", "must be even and at least 2"));
            }
        }
        let env_ok = match (&self.kind, &self.env) {
            (ExperimentKind::Coop, EnvSpec::Bernoulli { .. } | EnvSpec::Ratings { .. } | EnvSpec::Explicit { .. }) => true,
            (ExperimentKind::FedExp3, EnvSpec::Activation { .. } | EnvSpec::Bernoulli { .. } | EnvSpec::Ratings { .. } | EnvSpec::Explicit { .. }) => true,
            (ExperimentKind::FedOco, EnvSpec::OcoLinear { .. } | EnvSpec::OcoQuadratic { .. }) => true,
            (ExperimentKind::Matching | ExperimentKind::Chain, EnvSpec::None) => true,
            _ => false,
        };
        if !env_ok {
            return Err(Error::config("env.kind", format!("not usable with kind = {}", self.kind.label())));
        }
        Ok(())
    }

    /// Copy with one swept parameter set to `value`.
    pub fn with_override(&self, param: SweepParam, value: f64) -> Result<Self> {
        let mut c = self.clone();
        c.sweep = None;
        let as_usize = |field: &str| -> Result<usize> {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::config(field, format!("{value} is not a non-negative integer")))
            }
        };
        let topo_err = || Error::config("sweep.param", format!("`{}` needs a matching topology", param.label()));
        match param {
            SweepParam::Arms => match &mut c.env {
                EnvSpec::Bernoulli { arms } | EnvSpec::Activation { arms } | EnvSpec::Ratings { arms, .. } | EnvSpec::OcoLinear { arms } => {
                    *arms = as_usize("sweep.values")?
                }
                _ => return Err(Error::config("sweep.param", "env has no arm count")),
            },
            SweepParam::Delay => c.topology.as_mut().ok_or_else(topo_err)?.delay = as_usize("sweep.values")?,
            SweepParam::Radius => match &mut c.topology.as_mut().ok_or_else(topo_err)?.topology {
                Topology::Rgg { radius, .. } => *radius = value,
                _ => return Err(topo_err()),
            },
            SweepParam::Degree => match &mut c.topology.as_mut().ok_or_else(topo_err)?.topology {
                Topology::RRegular { r, .. } => *r = as_usize("sweep.values")?,
                _ => return Err(topo_err()),
            },
            SweepParam::Alpha => c.alpha = value,
            SweepParam::P => c.matching.as_mut().ok_or_else(|| Error::config("sweep.param", "p needs [matching]"))?.p = value,
            SweepParam::N => c.matching.as_mut().ok_or_else(|| Error::config("sweep.param", "n needs [matching]"))?.n = as_usize("sweep.values")?,
        }
        c.validate()?;
        Ok(c)
    }

    /// Canonical INI text; parses back to an equal config.
    pub fn to_ini_string(&self) -> String {
        let mut s = String::new();
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "[experiment]\nkind = {}\nname = {}\nseeds = {}", self.kind.label(), self.name, seeds.join(", "));
        let _ = writeln!(s, "output = {}\nhorizon = {}\nstride = {}", self.output.display(), self.horizon, self.stride);
        let _ = writeln!(s, "plot = {}\nuncapped = {}", self.plot, self.uncapped);
        if let Some(t) = &self.topology {
            let _ = writeln!(s, "\n[topology]");
            match &t.topology {
                Topology::Complete { n } => {
                    let _ = writeln!(s, "kind = complete\nn = {n}");
                }
                Topology::RRegular { n, r } => {
                    let _ = writeln!(s, "kind = rregular\nn = {n}\nr = {r}");
                }
                Topology::Star { n } => {
                    let _ = writeln!(s, "kind = star\nn = {n}");
                }
                Topology::Grid { rows, cols } => {
                    let _ = writeln!(s, "kind = grid\nrows = {rows}\ncols = {cols}");
                }
                Topology::ErdosRenyi { n, p } => {
                    let _ = writeln!(s, "kind = er\nn = {n}");
                    if let Some(p) = p {
                        let _ = writeln!(s, "p = {}", fmt_f64(*p));
                    }
                }
                Topology::Rgg { n, radius } => {
                    let _ = writeln!(s, "kind = rgg\nn = {n}\nradius = {}", fmt_f64(*radius));
                }
            }
            let _ = writeln!(s, "delay = {}\nseed = {}", t.delay, t.seed);
        }
        let env = match &self.env {
            EnvSpec::Bernoulli { arms } => Some(format!("kind = bernoulli\narms = {arms}")),
            EnvSpec::Activation { arms } => Some(format!("kind = activation\narms = {arms}")),
            EnvSpec::Ratings { path, arms } => Some(format!("kind = ratings\narms = {arms}\npath = {}", path.display())),
            EnvSpec::Explicit { path } => Some(format!("kind = explicit\npath = {}", path.display())),
            EnvSpec::OcoLinear { arms } => Some(format!("kind = oco-linear\narms = {arms}")),
            EnvSpec::OcoQuadratic { dim } => Some(format!("kind = oco-quadratic\ndim = {dim}")),
            EnvSpec::None => None,
        };
        if let Some(e) = env {
            let _ = writeln!(s, "\n[env]\n{e}");
        }
        let names: Vec<&str> = self.algorithms.iter().map(|a| a.label()).collect();
        let _ = writeln!(s, "\n[algorithm]\nnames = {}", names.join(", "));
        if let Some(eta) = self.eta {
            let _ = writeln!(s, "eta = {}", fmt_f64(eta));
        }
        let _ = writeln!(s, "cover_radius = {}\nalpha = {}", self.cover_radius, fmt_f64(self.alpha));
        if let Some(m) = &self.matching {
            let vals: Vec<&str> = m.values.iter().map(|v| if *v == ValueFn::Or { "or" } else { "and" }).collect();
            let _ = writeln!(s, "\n[matching]\nn = {}\np = {}\nvalue = {}\nc = {}", m.n, fmt_f64(m.p), vals.join(", "), fmt_f64(m.c));
        }
        if let Some(sw) = &self.sweep {
            let vals: Vec<String> = sw.values.iter().map(|v| fmt_f64(*v)).collect();
            let _ = writeln!(s, "\n[sweep]\nparam = {}\nvalues = {}", sw.param.label(), vals.join(", "));
        }
        s
    }
}

fn parse_topology(d: &Doc) -> Result<TopologySpec> {
    let kind: String = d.req("topology", "kind")?;
    let topology = match kind.as_str() {
        "complete" => Topology::Complete { n: d.req("topology", "n")? },
        "rregular" => Topology::RRegular { n: d.req("topology", "n")?, r: d.req("topology", "r")? },
        "star" => Topology::Star { n: d.req("topology", "n")? },
        "grid" => Topology::Grid { rows: d.req("topology", "rows")?, cols: d.req("topology", "cols")? },
        "er" => Topology::ErdosRenyi { n: d.req("topology", "n")?, p: d.opt("topology", "p")? },
        "rgg" => Topology::Rgg { n: d.req("topology", "n")?, radius: d.req("topology", "radius")? },
        other => return Err(Error::config("topology.kind", format!("unknown topology `{other}`"))),
    };
    Ok(TopologySpec {
        topology,
        delay: d.opt("topology", "delay")?.unwrap_or(1),
        seed: d.opt("topology", "seed")?.unwrap_or(0),
    })
}

fn parse_env(d: &Doc, kind: ExperimentKind) -> Result<EnvSpec> {
    let Some(k) = d.raw("env", "kind") else {
        return match kind {
            ExperimentKind::Matching | ExperimentKind::Chain => Ok(EnvSpec::None),
            _ => Err(Error::config("env.kind", "missing")),
        };
    };
    Ok(match k {
        "bernoulli" => EnvSpec::Bernoulli { arms: d.req("env", "arms")? },
        "activation" => EnvSpec::Activation { arms: d.req("env", "arms")? },
        "ratings" => EnvSpec::Ratings { path: d.req::<String>("env", "path")?.into(), arms: d.req("env", "arms")? },
        "explicit" => EnvSpec::Explicit { path: d.req::<String>("env", "path")?.into() },
        "oco-linear" => EnvSpec::OcoLinear { arms: d.req("env", "arms")? },
        "oco-quadratic" => EnvSpec::OcoQuadratic { dim: d.req("env", "dim")? },
        other => return Err(Error::config("env.kind", format!("unknown env `{other}`"))),
    })
}
