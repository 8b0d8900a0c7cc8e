//! Plain-text edge lists: a header line `n m`, then one `u v` line per edge.

use std::fmt::Write as _;

use super::Edge;
use crate::error::{Error, Result};

pub(super) fn parse_header(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut field = |name: &str| -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse { line: 1, msg: format!("missing {name}") })?
            .parse()
            .map_err(|_| Error::Parse { line: 1, msg: format!("bad {name}") })
    };
    let n = field("vertex count")?;
    let m = field("edge count")?;
    if it.next().is_some() {
        return Err(Error::Parse { line: 1, msg: "trailing tokens".into() });
    }
    if n > u32::MAX as usize {
        return Err(Error::Parse { line: 1, msg: "vertex count exceeds u32".into() });
    }
    Ok((n, m))
}

pub(super) fn parse_edge_line(line: &str, lineno: usize) -> Result<Edge> {
    let mut it = line.split_whitespace();
    let mut id = || -> Result<u32> {
        it.next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: lineno, msg: format!("expected `u v`, got {line:?}") })
    };
    let e = Edge::new(id()?, id()?);
    if it.next().is_some() {
        return Err(Error::Parse { line: lineno, msg: "trailing tokens".into() });
    }
    Ok(e)
}

/// Parses an edge list. Edges are range-checked but not deduplicated.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<Edge>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let (n, m) = parse_header(header)?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let e = parse_edge_line(line, i + 1)?;
        if e.from == e.to || e.from as usize >= n || e.to as usize >= n {
            return Err(Error::InvalidEdge { from: e.from, to: e.to, n });
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(Error::Parse { line: 1, msg: format!("header announces {m} edges, found {}", edges.len()) });
    }
    Ok((n, edges))
}

pub fn write_edge_list(n: usize, edges: &[Edge]) -> String {
    let mut out = String::with_capacity(12 * (edges.len() + 1));
    let _ = writeln!(out, "{n} {}", edges.len());
    for e in edges {
        let _ = writeln!(out, "{} {}", e.from, e.to);
    }
    out
}
