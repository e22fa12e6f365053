//! Experiment specifications and per-SNR result rows.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::codec::{make_ensemble, CodeEnsemble, Interleaver, Preset};
use crate::error::{Error, Result};
use crate::lattice::{PartitionTable, RingKind};

/// Degree distributions, length and partition of the simulated code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub edge_vn: BTreeMap<u32, f64>,
    pub edge_cn: BTreeMap<u32, f64>,
    /// transmitted symbols per frame
    pub n: usize,
    pub ring: RingKind,
    pub xi: String,
    #[serde(default)]
    pub interleaver: Interleaver,
}

impl EnsembleSpec {
    pub fn from_preset(preset: Preset, n: usize) -> Self {
        Self {
            edge_vn: preset.edge_vn(),
            edge_cn: preset.edge_cn(),
            n,
            ring: RingKind::Hurwitz,
            xi: "1+2i".into(),
            interleaver: Interleaver::Uniform,
        }
    }

    pub fn partition(&self) -> Result<PartitionTable> {
        PartitionTable::build(&self.xi, self.ring)
    }

    pub fn realize(&self) -> Result<CodeEnsemble> {
        make_ensemble(&self.edge_vn, &self.edge_cn, &self.partition()?, self.n)
    }
}

/// A row ends once it has `min_symbol_errors` symbol errors or
/// `max_frames` frames, whichever comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_symbol_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_symbol_errors: 100,
            max_frames: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphMode {
    /// new graph and sequences for every frame
    #[default]
    Fresh,
    /// one graph drawn from the master seed
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub ensemble: EnsembleSpec,
    pub snr_start: f64,
    pub snr_stop: f64,
    pub snr_step: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub stop: StopRule,
    pub master_seed: u64,
    #[serde(default)]
    pub graph_mode: GraphMode,
    /// `false` sends noiseless frames
    #[serde(default = "default_true")]
    pub noise: bool,
    /// frames decoded in parallel between stop-rule checks
    #[serde(default = "default_batch")]
    pub batch: usize,
    /// failing frames kept per SNR point for replay
    #[serde(default)]
    pub keep_failures: usize,
}

fn default_max_iterations() -> usize {
    200
}

fn default_true() -> bool {
    true
}

fn default_batch() -> usize {
    32
}

impl ExperimentSpec {
    pub fn new(ensemble: EnsembleSpec, snr_start: f64, snr_stop: f64, snr_step: f64, master_seed: u64) -> Self {
        Self {
            ensemble,
            snr_start,
            snr_stop,
            snr_step,
            max_iterations: default_max_iterations(),
            stop: StopRule::default(),
            master_seed,
            graph_mode: GraphMode::Fresh,
            noise: true,
            batch: default_batch(),
            keep_failures: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.snr_step > 0.0) {
            return Err(Error::InvalidInput("SNR step must be positive".into()));
        }
        if self.snr_stop < self.snr_start {
            return Err(Error::InvalidInput("SNR stop is below start".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be at least 1".into()));
        }
        if self.batch == 0 || self.stop.max_frames == 0 {
            return Err(Error::InvalidInput("batch and frame cap must be positive".into()));
        }
        Ok(())
    }

    /// SNR points from start to stop inclusive.
    pub fn snr_points(&self) -> Vec<f64> {
        let count = ((self.snr_stop - self.snr_start) / self.snr_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let v = self.snr_start + i as f64 * self.snr_step;
                (v * 1e9).round() / 1e9
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub snr_db: f64,
    pub frames: u64,
    pub symbol_errors: u64,
    pub frame_errors: u64,
    /// `symbol_errors / (frames·K)`
    pub ser: f64,
    pub fer: f64,
    pub avg_iterations: f64,
    /// frame cap reached before the error target
    pub capped: bool,
    /// seconds; not part of the persisted results
    #[serde(skip)]
    pub wall_time: f64,
}

impl ResultRow {
    /// Wilson score interval for the SER at `z` standard deviations, over
    /// `frames·K` symbol trials.
    pub fn ser_interval(&self, k: usize, z: f64) -> (f64, f64) {
        wilson(self.symbol_errors, self.frames * k as u64, z)
    }
}

pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}
