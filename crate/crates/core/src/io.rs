//! Edge-list text format: a `# hscm v1 n=<n> seed=<seed>` header followed by
//! sorted, 0-indexed `u v` lines.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::sampler::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub n: usize,
    pub seed: Option<u64>,
}

pub fn parse_header(line: &str) -> Option<Header> {
    let mut it = line.trim_start_matches('#').split_whitespace();
    if it.next()? != "hscm" || it.next()? != "v1" {
        return None;
    }
    let mut n = None;
    let mut seed = None;
    for kv in it {
        match kv.split_once('=') {
            Some(("n", v)) => n = v.parse().ok(),
            Some(("seed", v)) => seed = v.parse().ok(),
            _ => {}
        }
    }
    Some(Header { n: n?, seed })
}

pub fn write_edge_list(g: &Graph, seed: u64, mut w: impl Write) -> Result<()> {
    writeln!(w, "# hscm v1 n={} seed={}", g.n(), seed)?;
    for &(i, j) in g.edges() {
        writeln!(w, "{i} {j}")?;
    }
    w.flush()?;
    Ok(())
}

/// Strict reader for files written by [`write_edge_list`].
pub fn read_edge_list(r: impl BufRead) -> Result<(Graph, Header)> {
    let mut lines = r.lines();
    let first = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })??;
    let header = parse_header(&first).ok_or(Error::Parse { line: 1, msg: "missing '# hscm v1' header".into() })?;
    let mut edges = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split_whitespace().map(|s| s.parse::<u32>());
        match (parts.next(), parts.next(), parts.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(Error::Parse { line: lineno, msg: format!("expected 'u v', got '{t}'") }),
        }
    }
    let g = Graph::new(header.n, edges).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    Ok((g, header))
}
