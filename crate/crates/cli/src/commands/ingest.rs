use serde_json::json;

use hscm_core::stats::{fit_power_law_tail, ingest_edge_list};

use crate::args::{Command, IngestArgs};
use crate::error::CliResult;
use crate::output::{num, write_csv, write_json};

pub fn run(cmd: &Command, a: &IngestArgs) -> CliResult<()> {
    let rep = ingest_edge_list(&a.input)?;
    if rep.duplicates > 0 || rep.self_loops > 0 {
        eprintln!("warning: dropped {} duplicate edges and {} self-loops", rep.duplicates, rep.self_loops);
    }
    let h = &rep.histogram;
    let pmf = h.pmf();
    write_csv(
        &a.out.join("degrees.csv"),
        &["k", "count", "empirical_pmf"],
        h.counts.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string(), num(pmf[k])]),
    )?;
    write_csv(
        &a.out.join("degrees_logbinned.csv"),
        &["k_lo", "k_hi", "empirical_density"],
        h.log_binned().into_iter().map(|(lo, hi, d)| vec![lo.to_string(), hi.to_string(), num(d)]),
    )?;
    let tail = match fit_power_law_tail(h, 100) {
        Ok(f) => json!(f),
        Err(e) => json!({ "error": e.to_string() }),
    };
    write_json(
        &a.out.join("summary.json"),
        cmd,
        json!({
            "n": rep.n,
            "edges": rep.edges,
            "duplicates": rep.duplicates,
            "self_loops": rep.self_loops,
            "one_indexed": rep.one_indexed,
            "avg_degree": if rep.n > 0 { h.mean_degree() } else { 0.0 },
            "tail": tail,
        }),
    )
}
