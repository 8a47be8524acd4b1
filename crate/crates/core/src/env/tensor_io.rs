use std::fmt::Write as _;
use std::path::Path;

use super::LossTensor;
use crate::error::{Error, Result};

/// Header `T N K`, then one line per `(t, v)` with the K arm losses.
/// Values use the shortest round-trip decimal form, so reading back is exact.
pub fn format_tensor(env: &LossTensor) -> String {
    let (n, k) = (env.n_agents(), env.n_arms());
    let mut s = format!("{} {} {}\n", env.horizon(), n, k);
    for t in 0..env.horizon() {
        let r = env.round(t);
        for v in 0..n {
            let line: Vec<String> = r[v * k..(v + 1) * k].iter().map(|x| format!("{x:?}")).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
    }
    s
}

pub fn parse_tensor(text: &str, path: &Path) -> Result<LossTensor> {
    let err = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |tok| (i + 1, tok)));
    let mut dim = |name: &str| -> Result<usize> {
        let (line, tok) = tokens.next().ok_or_else(|| err(1, format!("missing header field {name}")))?;
        tok.parse().map_err(|_| err(line, format!("bad {name} `{tok}`")))
    };
    let (t, n, k) = (dim("T")?, dim("N")?, dim("K")?);
    let expected = t * n * k;
    let mut values = Vec::with_capacity(expected);
    for (line, tok) in tokens {
        let x: f64 = tok.parse().map_err(|_| err(line, format!("bad value `{tok}`")))?;
        if !(0.0..=1.0).contains(&x) {
            return Err(err(line, format!("loss {x} outside [0,1]")));
        }
        values.push(x);
    }
    if values.len() != expected {
        return Err(err(text.lines().count(), format!("expected {expected} values, found {}", values.len())));
    }
    LossTensor::from_dense(t, n, k, values)
}

pub fn write_tensor(env: &LossTensor, path: &Path) -> Result<()> {
    std::fs::write(path, format_tensor(env))?;
    Ok(())
}

/// Loads an explicit tensor file.
pub fn explicit_env(path: &Path) -> Result<LossTensor> {
    parse_tensor(&std::fs::read_to_string(path)?, path)
}
