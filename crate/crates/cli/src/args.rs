//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "ira-lattice", version, about = "IRA lattice codes over Hurwitz-quaternion partitions")]
pub struct Cli {
    /// Master seed for every random stream
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output directory for artifacts and the run manifest
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (0 uses every core)
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Enumerate the coset leaders of Λ/ξΛ
    Partition(PartitionArgs),
    /// Realize an ensemble at a given length and optionally sample a graph
    Ensemble(EnsembleArgs),
    /// Tabulate the VND and CND EXIT curves at one SNR
    Exit(ExitArgs),
    /// Optimize the variable-node distribution for a rate and SNR
    Optimize(OptimizeArgs),
    /// Search the decoding threshold of an ensemble
    Threshold(ThresholdArgs),
    /// Run a Monte-Carlo SER/FER sweep
    Simulate(SimulateArgs),
    /// Tabulate the constellation capacities and Shannon limits
    Capacity(CapacityArgs),
    /// Re-decode a stored frame with a per-iteration trace
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Hurwitz,
    Gaussian,
}

#[derive(Debug, Args, Serialize)]
pub struct PartitionSpec {
    /// Modulus ξ as a quaternion, e.g. 1+2i
    #[arg(long, default_value = "1+2i")]
    pub xi: String,
    /// Base ring
    #[arg(long, value_enum, default_value_t = Ring::Hurwitz)]
    pub ring: Ring,
}

#[derive(Debug, Args, Serialize)]
pub struct DistributionSpec {
    /// Built-in rate preset: 3/4, 2/3 or 1/2
    #[arg(long, alias = "table1-rate", conflicts_with_all = ["vn", "cn"])]
    pub preset: Option<String>,
    /// Edge-perspective variable-node degrees, e.g. 2:0.3,3:0.7
    #[arg(long, requires = "cn")]
    pub vn: Option<String>,
    /// Edge-perspective check-node degrees, e.g. 1:0.1,3:0.9
    #[arg(long, requires = "vn")]
    pub cn: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct InterleaverSpec {
    /// Break cycles through degree-2 information nodes spanning at most this
    /// many accumulator steps (uniform interleaver when absent)
    #[arg(long)]
    pub spread: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub partition: PartitionSpec,
}

#[derive(Debug, Args, Serialize)]
pub struct EnsembleArgs {
    #[command(flatten)]
    pub distribution: DistributionSpec,
    #[command(flatten)]
    pub partition: PartitionSpec,
    /// Transmitted symbols per frame
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Also sample a graph instance from --seed
    #[arg(long)]
    pub graph: bool,
    #[command(flatten)]
    pub interleaver: InterleaverSpec,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Mixture,
    Gaussian,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CndScope {
    Chain,
    Neighborhood,
}

#[derive(Debug, Args, Serialize)]
pub struct CndArgs {
    /// Check nodes per Monte-Carlo chain
    #[arg(long, default_value_t = 500)]
    pub block_checks: usize,
    /// Monte-Carlo chains per curve point
    #[arg(long, default_value_t = 20)]
    pub blocks: usize,
    /// Check-node pass scope
    #[arg(long, value_enum, default_value_t = CndScope::Chain)]
    pub cnd_mode: CndScope,
    /// Grid points on [0, 1]
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Check-node input model
    #[arg(long, value_enum, default_value_t = Model::Mixture)]
    pub model: Model,
}

#[derive(Debug, Args, Serialize)]
pub struct ExitArgs {
    #[command(flatten)]
    pub distribution: DistributionSpec,
    #[command(flatten)]
    pub cnd: CndArgs,
    /// Channel SNR in dB
    #[arg(long, allow_negative_numbers = true)]
    pub snr: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct OptimizeArgs {
    /// Starting check-node distribution (edge perspective)
    #[arg(long, conflicts_with = "preset")]
    pub cn: Option<String>,
    /// Take the starting check-node distribution and rate from a preset
    #[arg(long, alias = "table1-rate")]
    pub preset: Option<String>,
    /// Target K/N
    #[arg(long)]
    pub rate: Option<f64>,
    /// Channel SNR in dB
    #[arg(long, allow_negative_numbers = true)]
    pub snr: f64,
    /// Largest candidate variable-node degree
    #[arg(long, default_value_t = 40)]
    pub max_degree: u32,
    /// Minimum tunnel gap
    #[arg(long, default_value_t = 1e-4)]
    pub gap: f64,
    /// Outer LP rounds
    #[arg(long, default_value_t = 10)]
    pub rounds: usize,
    /// Relative step for the degree-1 check fraction (0 keeps it fixed)
    #[arg(long, default_value_t = 0.05)]
    pub cn_step: f64,
    #[command(flatten)]
    pub partition: PartitionSpec,
    #[command(flatten)]
    pub cnd: CndArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub distribution: DistributionSpec,
    #[command(flatten)]
    pub partition: PartitionSpec,
    #[command(flatten)]
    pub cnd: CndArgs,
    /// Lower end of the bisection bracket in dB
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub lo: f64,
    /// Upper end of the bisection bracket in dB
    #[arg(long, default_value_t = 15.0)]
    pub hi: f64,
    /// Bisection resolution in dB
    #[arg(long, default_value_t = 0.01)]
    pub resolution: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphChoice {
    Fresh,
    Fixed,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Experiment spec JSON; replaces the ensemble and sweep flags
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub distribution: DistributionSpec,
    #[command(flatten)]
    pub partition: PartitionSpec,
    /// Transmitted symbols per frame
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[command(flatten)]
    pub interleaver: InterleaverSpec,
    /// First SNR in dB
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub snr_start: f64,
    /// Last SNR in dB (inclusive)
    #[arg(long, allow_negative_numbers = true)]
    pub snr_stop: Option<f64>,
    /// SNR step in dB
    #[arg(long, default_value_t = 0.1)]
    pub snr_step: f64,
    /// Decoder iteration cap
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Symbol errors that end an SNR point
    #[arg(long, default_value_t = 100)]
    pub min_errors: u64,
    /// Frame cap per SNR point
    #[arg(long, default_value_t = 100_000)]
    pub max_frames: u64,
    /// Transmit without noise
    #[arg(long)]
    pub no_noise: bool,
    /// Graph per frame or one graph for the sweep
    #[arg(long, value_enum, default_value_t = GraphChoice::Fresh)]
    pub graph_mode: GraphChoice,
    /// Frames decoded between stop-rule checks
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    /// Failing frames written per SNR point for replay
    #[arg(long, default_value_t = 0)]
    pub keep_failures: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CapacityArgs {
    /// First SNR in dB
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub snr_start: f64,
    /// Last SNR in dB (inclusive)
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub snr_stop: f64,
    /// SNR step in dB
    #[arg(long, default_value_t = 0.5)]
    pub snr_step: f64,
    /// Monte-Carlo samples per point and partition
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    /// Rates (bits per complex dimension) to report Shannon limits for
    #[arg(long, value_delimiter = ',', default_values_t = [1.741, 1.548, 1.161])]
    pub rates: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    /// Stored frame record
    pub frame: PathBuf,
    /// Iteration cap (the stored cap when absent)
    #[arg(long)]
    pub max_iter: Option<usize>,
}
