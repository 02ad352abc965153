//! Plain-text edge lists.
//!
//! One edge `u v` per line with 0-indexed ids. Lines starting with `#` are
//! comments. The first non-comment line may be `n <count>` to fix the vertex
//! count (needed for trailing isolated vertices); otherwise the count is one
//! past the largest id seen.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared_n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let first = tokens.next().expect("non-empty line has a token");

        if first == "n" {
            if seen_content {
                return Err(parse_err(line_no, "`n <count>` must be the first line"));
            }
            let count = tokens
                .next()
                .ok_or_else(|| parse_err(line_no, "missing vertex count"))?;
            let count = count
                .parse::<usize>()
                .map_err(|e| parse_err(line_no, format!("bad vertex count {count:?}: {e}")))?;
            if tokens.next().is_some() {
                return Err(parse_err(line_no, "trailing tokens after vertex count"));
            }
            declared_n = Some(count);
            seen_content = true;
            continue;
        }
        seen_content = true;

        let second = tokens
            .next()
            .ok_or_else(|| parse_err(line_no, "expected two vertex ids"))?;
        if tokens.next().is_some() {
            return Err(parse_err(line_no, "expected exactly two vertex ids"));
        }
        let u = parse_id(first, line_no)?;
        let v = parse_id(second, line_no)?;
        edges.push((u, v));
    }

    let n = match declared_n {
        Some(n) => {
            if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u.max(v) as usize >= n) {
                return Err(Error::VertexOutOfRange { id: u.max(v), n });
            }
            n
        }
        None => edges
            .iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0),
    };
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameter(format!(
            "vertex count {n} too large"
        )));
    }
    Graph::from_edges(n, edges.into_iter().map(|(u, v)| (u as u32, v as u32)))
}

fn parse_id(tok: &str, line: usize) -> Result<u64> {
    let id: i64 = tok
        .parse()
        .map_err(|e| parse_err(line, format!("bad vertex id {tok:?}: {e}")))?;
    if id < 0 {
        return Err(parse_err(line, format!("negative vertex id {id}")));
    }
    if id > u32::MAX as i64 {
        return Err(parse_err(line, format!("vertex id {id} too large")));
    }
    Ok(id as u64)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Canonical form: `n <count>` followed by sorted `u v` lines with `u < v`.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(8 * (g.m() + 1));
    writeln!(out, "n {}", g.n()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_edge_list(g))?;
    Ok(())
}
