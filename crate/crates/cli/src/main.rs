mod args;
mod commands;
mod error;
mod output;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliResult;

pub(crate) fn run_with_jobs(cmd: &Command, jobs: usize) -> CliResult<()> {
    hscm_core::exec::with_threads(jobs, || commands::run(cmd))
}

fn main() {
    let cli = Cli::parse();
    let jobs = match &cli.command {
        Command::Generate(a) => a.exec.jobs,
        Command::Degrees(a) => a.exec.jobs,
        Command::Entropy(a) => a.exec.jobs,
        Command::Replay(a) => a.exec.jobs,
        _ => 0,
    };
    if let Err(e) = run_with_jobs(&cli.command, jobs) {
        eprintln!("hscm: {e}");
        std::process::exit(e.exit_code());
    }
}
