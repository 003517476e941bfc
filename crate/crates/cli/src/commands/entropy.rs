use serde_json::json;

use hscm_core::entropy::{gibbs_entropy_bounds_with, graphon_entropy, PartitionSpec};

use super::sidecar_for;
use crate::args::{params, Command, EntropyArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, write_csv, write_json};

pub fn run(cmd: &Command, a: &EntropyArgs) -> CliResult<()> {
    if a.sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::config("--sizes must be strictly increasing"));
    }
    let all: Vec<_> = a.sizes.iter().map(|&n| params(&a.model, n)).collect::<CliResult<_>>()?;
    if let Some(p) = all.iter().find(|p| p.n < 2 || p.r_n <= 0.0) {
        return Err(CliError::config(format!("n = {} is too small for the partition (needs R_n > 0)", p.n)));
    }
    let exec = a.exec.exec();
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for p in &all {
        let rep = gibbs_entropy_bounds_with(p, exec)?;
        let sigma = graphon_entropy(p, a.kernel.into())?;
        let ln = (p.n as f64).ln();
        rows.push(vec![
            p.n.to_string(),
            num(sigma),
            num(p.n as f64 * sigma / ln),
            num(rep.lower_rescaled()),
            num(rep.upper_rescaled()),
            num(rep.s_m),
            rep.partition.m.to_string(),
        ]);
        debug_assert_eq!(rep.partition.m, PartitionSpec::default_count(p.n));
        reports.push(json!({
            "n": p.n,
            "sigma": sigma,
            "gibbs_lower": rep.gibbs_lower,
            "gibbs_upper": rep.gibbs_upper,
            "sigma_averaged": rep.sigma_averaged,
            "s_m": rep.s_m,
            "m_n": rep.partition.m,
        }));
    }
    write_csv(
        &a.out,
        &["n", "sigma", "n_sigma_over_log_n", "gibbs_lower_rescaled", "gibbs_upper_rescaled", "s_m", "m_n"],
        rows,
    )?;
    write_json(&sidecar_for(&a.out), cmd, json!({ "kernel": a.kernel, "rows": reports }))
}
