mod degrees;
mod entropy;
mod generate;
mod ingest;
mod scm;
mod theory;

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::args::Command;
use crate::error::{CliError, CliResult};

pub fn run(cmd: &Command) -> CliResult<()> {
    let started = Instant::now();
    match cmd {
        Command::Generate(a) => generate::run(cmd, a, started),
        Command::Degrees(a) => degrees::run(cmd, a),
        Command::Entropy(a) => entropy::run(cmd, a),
        Command::Theory(a) => theory::run(cmd, a),
        Command::ScmSolve(a) => scm::run(cmd, a),
        Command::Ingest(a) => ingest::run(cmd, a),
        Command::Replay(a) => {
            let text = std::fs::read_to_string(&a.sidecar)?;
            let doc: serde_json::Value = serde_json::from_str(&text)?;
            let cfg = doc.get("config").cloned().ok_or_else(|| CliError::config("sidecar has no config"))?;
            let mut recorded: Command =
                serde_json::from_value(cfg).map_err(|e| CliError::config(format!("unreadable config: {e}")))?;
            set_exec(&mut recorded, a.exec.jobs);
            crate::run_with_jobs(&recorded, a.exec.jobs)
        }
    }
}

fn set_exec(cmd: &mut Command, jobs: usize) {
    match cmd {
        Command::Generate(a) => a.exec.jobs = jobs,
        Command::Degrees(a) => a.exec.jobs = jobs,
        Command::Entropy(a) => a.exec.jobs = jobs,
        _ => {}
    }
}

/// `data.csv` → `data.json`
fn sidecar_for(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}
