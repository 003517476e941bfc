use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hscm_core::sampler::SamplerKind;
use hscm_core::{EnsembleParams, Exec, KernelKind};

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "hscm", version, about = "Hypersoft configuration model experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Every subcommand's configuration; recorded verbatim in output sidecars.
#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Sample graphs and write one edge list per replica plus meta.json
    Generate(GenerateArgs),
    /// Degree distribution of sampled or given graphs against theory
    Degrees(DegreesArgs),
    /// Graphon entropy and Gibbs entropy bounds over a list of sizes
    Entropy(EntropyArgs),
    /// Theoretical degree law, finite-n average degree and tail curves
    Theory(TheoryArgs),
    /// Solve for soft configuration model multipliers
    ScmSolve(ScmArgs),
    /// Degree histogram of an external edge list
    Ingest(IngestArgs),
    /// Re-run the configuration recorded in a JSON sidecar
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ModelArgs {
    /// Power-law shape γ > 1
    #[arg(long)]
    pub gamma: f64,
    /// Target average degree ν > 0
    #[arg(long)]
    pub nu: f64,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct ExecArgs {
    /// Worker threads (0 = all cores, 1 = sequential)
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub jobs: usize,
}

impl ExecArgs {
    pub fn exec(&self) -> Exec {
        if self.jobs == 1 {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerArg {
    Fast,
    Naive,
    Growing,
}

impl From<SamplerArg> for SamplerKind {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Fast => SamplerKind::Fast,
            SamplerArg::Naive => SamplerKind::Naive,
            SamplerArg::Growing => SamplerKind::Growing,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelArg {
    FermiDirac,
    ClassicalLimit,
}

impl From<KernelArg> for KernelKind {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::FermiDirac => KernelKind::FermiDirac,
            KernelArg::ClassicalLimit => KernelKind::ClassicalLimit,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Number of nodes
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
    /// Run seed; replica r uses a seed derived from (seed, r)
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SamplerArg::Fast)]
    pub sampler: SamplerArg,
    /// Allow the quadratic naive sampler beyond its size guard
    #[arg(long)]
    pub allow_large: bool,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub exec: ExecArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct DegreesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Edge-list files written by `generate` (instead of sampling)
    #[arg(long, num_args = 1.., conflicts_with_all = ["n", "seed"])]
    #[serde(default)]
    pub input: Vec<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub replicas: u64,
    #[arg(long, required_unless_present = "input")]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = SamplerArg::Fast)]
    pub sampler: SamplerArg,
    /// Largest k compared against theory; higher degrees form one lumped bin
    #[arg(long, default_value_t = 100)]
    pub kmax: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub exec: ExecArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Strictly increasing graph sizes, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<u64>,
    /// Kernel for the sigma columns; the Gibbs bounds always use the model kernel
    #[arg(long, value_enum, default_value_t = KernelArg::FermiDirac)]
    pub kernel: KernelArg,
    /// Output CSV; a JSON sidecar is written next to it
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub exec: ExecArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct TheoryArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 100)]
    pub kmax: u64,
    /// Points on the log-spaced tail grid
    #[arg(long, default_value_t = 200)]
    pub tail_points: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ScmArgs {
    /// File with one expected degree per line
    #[arg(long, conflicts_with_all = ["gamma", "nu", "n", "seed"])]
    pub degrees: Option<PathBuf>,
    /// Freeze an HSCM sample instead: its expected degrees become the constraints
    #[arg(long, requires_all = ["nu", "n", "seed"])]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output CSV; a JSON sidecar is written next to it
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct IngestArgs {
    /// Whitespace-separated edge list, 0- or 1-indexed
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    /// A JSON sidecar written by any subcommand
    pub sidecar: PathBuf,
    #[command(flatten)]
    pub exec: ExecArgs,
}

pub fn params(model: &ModelArgs, n: u64) -> CliResult<EnsembleParams> {
    EnsembleParams::new(model.gamma, model.nu, n).map_err(|e| CliError::config(e.to_string()))
}
