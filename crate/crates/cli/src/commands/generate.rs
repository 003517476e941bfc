use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use hscm_core::io::write_edge_list;
use hscm_core::rng::replica_seed;
use hscm_core::sampler::{sample_replica, NAIVE_LIMIT};
use hscm_core::Exec;

use crate::args::{params, Command, GenerateArgs, SamplerArg};
use crate::error::{CliError, CliResult};
use crate::output::{write_atomic, write_json};

#[derive(Serialize)]
struct ReplicaMeta {
    file: String,
    seed: u64,
    edges: usize,
    average_degree: f64,
}

pub fn run(cmd: &Command, a: &GenerateArgs, started: Instant) -> CliResult<()> {
    let p = params(&a.model, a.n)?;
    if a.replicas == 0 {
        return Err(CliError::config("--replicas must be at least 1"));
    }
    if a.n > i32::MAX as u64 {
        return Err(CliError::config("n must be below 2^31"));
    }
    if a.sampler == SamplerArg::Naive && a.n as usize > NAIVE_LIMIT && !a.allow_large {
        return Err(CliError::config(format!("naive sampler limited to n ≤ {NAIVE_LIMIT} without --allow-large")));
    }
    let exec = a.exec.exec();
    let inner = if a.replicas > 1 { Exec::Sequential } else { exec };
    let replicas = exec.try_map_range(a.replicas as usize, |r| -> CliResult<ReplicaMeta> {
        let seed = replica_seed(a.seed, r as u64);
        let g = sample_replica(&p, seed, a.sampler.into(), inner, a.allow_large)?;
        let file = format!("graph_{r:04}.edges");
        write_atomic(&a.out.join(&file), |w| Ok(write_edge_list(&g, seed, w)?))?;
        Ok(ReplicaMeta { file, seed, edges: g.edge_count(), average_degree: g.average_degree() })
    })?;
    write_json(
        &a.out.join("meta.json"),
        cmd,
        json!({
            "params": p,
            "representation": "exponential",
            "replicas": replicas,
            "wall_time_s": started.elapsed().as_secs_f64(),
        }),
    )
}
