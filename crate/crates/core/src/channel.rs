//! Complex AWGN channel, symbol APPs and random-coset removal.
//!
//! The constellation has unit mean energy per complex use and is scaled by
//! `√SNR`; the noise has unit variance per complex use (½ per real
//! dimension), so the likelihood of leader `k` is `exp(−‖y − √SNR·s_k‖²)`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::codec::message::ProbVec;
use crate::error::{Error, Result};
use crate::lattice::{Constellation, PartitionTable};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub seed: u64,
    /// `false` transmits `√SNR·x` without noise
    pub noise: bool,
}

impl ChannelConfig {
    pub fn new(snr_db: f64, seed: u64) -> Self {
        Self {
            snr_db,
            seed,
            noise: true,
        }
    }

    pub fn noiseless(snr_db: f64) -> Self {
        Self {
            snr_db,
            seed: 0,
            noise: false,
        }
    }

    pub fn snr_linear(&self) -> f64 {
        db_to_linear(self.snr_db)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Received real samples, `dim` per lattice symbol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReceivedFrame {
    pub dim: usize,
    pub y: Vec<f64>,
}

impl ReceivedFrame {
    pub fn len(&self) -> usize {
        self.y.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn symbol(&self, n: usize) -> &[f64] {
        &self.y[n * self.dim..(n + 1) * self.dim]
    }
}

/// Sends leader indices over the channel. Real coordinates `(c1, ci)` form
/// the first complex use and `(cj, ck)` the second.
pub fn awgn_transmit(x: &[u8], constellation: &Constellation, config: &ChannelConfig) -> ReceivedFrame {
    let mut rng = rng::stream(config.seed, 0);
    transmit_with(x, constellation, config.snr_linear().sqrt(), config.noise, &mut rng)
}

pub(crate) fn transmit_with(
    x: &[u8],
    constellation: &Constellation,
    amplitude: f64,
    noise: bool,
    rng: &mut impl Rng,
) -> ReceivedFrame {
    let dim = constellation.real_dim();
    let sigma = std::f64::consts::FRAC_1_SQRT_2;
    let mut y = Vec::with_capacity(x.len() * dim);
    for &k in x {
        for &s in &constellation.points[k as usize] {
            let z: f64 = if noise { rng.sample(StandardNormal) } else { 0.0 };
            y.push(amplitude * s + sigma * z);
        }
    }
    ReceivedFrame { dim, y }
}

/// Per-symbol APP evaluator for a fixed constellation and SNR.
#[derive(Clone, Debug)]
pub struct Demapper {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl Demapper {
    pub fn new(constellation: &Constellation, snr_db: f64) -> Self {
        let a = db_to_linear(snr_db).sqrt();
        Self {
            points: constellation
                .points
                .iter()
                .map(|p| p.iter().map(|v| v * a).collect())
                .collect(),
            dim: constellation.real_dim(),
        }
    }

    /// Writes the normalized APP of one received symbol into `out`.
    pub fn app_into(&self, y: &[f64], out: &mut [f64]) {
        let mut best = f64::NEG_INFINITY;
        for (o, p) in out.iter_mut().zip(&self.points) {
            let d2: f64 = y.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum();
            *o = -d2;
            best = best.max(*o);
        }
        let mut sum = 0.0;
        for o in out.iter_mut() {
            *o = (*o - best).exp();
            sum += *o;
        }
        for o in out.iter_mut() {
            *o /= sum;
        }
    }

    /// Row-major `N × q` APPs.
    pub fn app_flat(&self, frame: &ReceivedFrame) -> Vec<f64> {
        let q = self.points.len();
        let mut out = vec![0.0; frame.len() * q];
        for (n, row) in out.chunks_mut(q).enumerate() {
            self.app_into(&frame.y[n * self.dim..(n + 1) * self.dim], row);
        }
        out
    }
}

/// APP of every leader for each received symbol.
pub fn compute_app(frame: &ReceivedFrame, constellation: &Constellation, config: &ChannelConfig) -> Vec<ProbVec<f64>> {
    let demapper = Demapper::new(constellation, config.snr_db);
    let q = constellation.size();
    demapper
        .app_flat(frame)
        .chunks(q)
        .map(|row| ProbVec::from_weights(row.to_vec()))
        .collect()
}

/// APPs of `c = x ⊖ r`: `out[k] = app[k ⊕ r_n]`.
pub fn remove_coset(app: &[ProbVec<f64>], r: &[u8], table: &PartitionTable) -> Result<Vec<ProbVec<f64>>> {
    if app.len() != r.len() {
        return Err(Error::LengthMismatch {
            expected: app.len(),
            found: r.len(),
        });
    }
    Ok(app
        .iter()
        .zip(r)
        .map(|(p, &rn)| p.shifted(rn as usize, table))
        .collect())
}

/// In-place [`remove_coset`] on row-major APPs.
pub fn remove_coset_flat(app: &mut [f64], r: &[u8], table: &PartitionTable) {
    let q = table.size();
    let mut tmp = vec![0.0; q];
    for (row, &rn) in app.chunks_mut(q).zip(r) {
        for (k, t) in tmp.iter_mut().enumerate() {
            *t = row[table.add_idx(k, rn as usize)];
        }
        row.copy_from_slice(&tmp);
    }
}

/// Inverse of [`remove_coset`].
pub fn add_coset(app: &[ProbVec<f64>], r: &[u8], table: &PartitionTable) -> Vec<ProbVec<f64>> {
    app.iter()
        .zip(r)
        .map(|(p, &rn)| p.shifted(table.neg_idx(rn as usize), table))
        .collect()
}
