//! Reading external edge lists into degree histograms.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DegreeHistogram;
use crate::error::{Error, Result};
use crate::io::parse_header;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub histogram: DegreeHistogram,
    pub n: usize,
    pub edges: usize,
    pub duplicates: usize,
    pub self_loops: usize,
    /// Ids were shifted down by one (no header and no node 0 seen).
    pub one_indexed: bool,
}

pub fn ingest_edge_list(path: impl AsRef<Path>) -> Result<IngestReport> {
    ingest_reader(BufReader::new(File::open(path)?))
}

/// Parse whitespace-separated `u v` lines (extra columns ignored, `#`/`%`
/// comments skipped). A `# hscm v1 n=…` header fixes `n` and 0-indexing.
pub fn ingest_reader(r: impl BufRead) -> Result<IngestReport> {
    let mut header_n = None;
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if t.starts_with('#') {
            if let Some(h) = parse_header(t) {
                header_n = Some(h.n);
            }
            continue;
        }
        let mut it = t.split_whitespace();
        let mut id = |what: &str| -> Result<u64> {
            let tok = it.next().ok_or_else(|| Error::Parse { line: i + 1, msg: format!("missing {what} endpoint") })?;
            tok.parse::<u64>()
                .map_err(|_| Error::Parse { line: i + 1, msg: format!("'{tok}' is not a node id") })
        };
        let u = id("first")?;
        let v = id("second")?;
        raw.push((u, v));
    }
    let min_id = raw.iter().map(|&(u, v)| u.min(v)).min();
    let one_indexed = header_n.is_none() && min_id.is_some_and(|m| m >= 1);
    let shift = u64::from(one_indexed);
    let mut self_loops = 0;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(raw.len());
    let mut max_id = 0u64;
    for (u, v) in raw {
        let (u, v) = (u - shift, v - shift);
        max_id = max_id.max(u.max(v));
        if max_id > i32::MAX as u64 {
            return Err(Error::domain(format!("node id {max_id} exceeds 32-bit range")));
        }
        if u == v {
            self_loops += 1;
            continue;
        }
        edges.push(if u < v { (u as u32, v as u32) } else { (v as u32, u as u32) });
    }
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    let duplicates = before - edges.len();
    let n = match header_n {
        Some(n) => {
            if (!edges.is_empty() || self_loops > 0) && max_id >= n as u64 {
                return Err(Error::domain(format!("node id {max_id} outside header n = {n}")));
            }
            n
        }
        None if edges.is_empty() && self_loops == 0 => 0,
        None => max_id as usize + 1,
    };
    let mut deg = vec![0u32; n];
    for &(u, v) in &edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    let mut histogram = DegreeHistogram::new(n);
    histogram.add_degrees(&deg);
    Ok(IngestReport { histogram, n, edges: edges.len(), duplicates, self_loops, one_indexed })
}
