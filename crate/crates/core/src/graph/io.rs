use std::path::Path;

use super::CommGraph;
use crate::error::{Error, Result};

/// Edge-list text: header `n d`, then one `u v` line per edge, lexicographic.
pub fn format_edge_list(g: &CommGraph) -> String {
    let mut s = format!("{} {}\n", g.n_agents(), g.edge_delay());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn parse_edge_list(text: &str, path: &Path) -> Result<CommGraph> {
    let err = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| err(1, "empty edge list".into()))?;
    let nums = |l: &str, i: usize| -> Result<(usize, usize)> {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(err(i + 1, format!("expected two integers, got `{l}`")));
        }
        let a = parts[0].parse().map_err(|_| err(i + 1, format!("bad integer `{}`", parts[0])))?;
        let b = parts[1].parse().map_err(|_| err(i + 1, format!("bad integer `{}`", parts[1])))?;
        Ok((a, b))
    };
    let (n, d) = nums(header, hl)?;
    let mut edges = Vec::new();
    for (i, l) in lines {
        edges.push(nums(l, i)?);
    }
    CommGraph::from_edges(n, edges, d)
}

pub fn write_edge_list(g: &CommGraph, path: &Path) -> Result<()> {
    std::fs::write(path, format_edge_list(g))?;
    Ok(())
}

pub fn read_edge_list(path: &Path) -> Result<CommGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?, path)
}
