//! Capacity curves of the two partitions against `log₂(1 + SNR)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exit::{constellation_mi, unrestricted_capacity};
use crate::lattice::{normalize_constellation, PartitionTable};
use crate::rng::derive_seed;

/// Bits per complex dimension at one SNR.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityRow {
    pub snr_db: f64,
    pub unrestricted: f64,
    pub hurwitz: f64,
    pub hurwitz_stderr: f64,
    pub gaussian: f64,
    pub gaussian_stderr: f64,
    /// `hurwitz − gaussian`
    pub dominance: f64,
    /// `dominance / √(se_H² + se_G²)`
    pub dominance_z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityTable {
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<CapacityRow>,
}

impl CapacityTable {
    /// Every point has `dominance ≥ −z·stderr`.
    pub fn dominates(&self, z: f64) -> bool {
        self.rows.iter().all(|r| r.dominance_z >= -z)
    }

    /// `(name, points)` for each of the three curves.
    pub fn curves(&self) -> Vec<(&'static str, Vec<(f64, f64)>)> {
        let pick = |f: fn(&CapacityRow) -> f64| self.rows.iter().map(|r| (r.snr_db, f(r))).collect();
        vec![
            ("unrestricted", pick(|r| r.unrestricted)),
            ("hurwitz", pick(|r| r.hurwitz)),
            ("gaussian", pick(|r| r.gaussian)),
        ]
    }
}

/// Tabulates both partition capacities and the unrestricted capacity over
/// `snr_db`. SNR point `i` of partition `p` uses seed stream `2i + p`.
pub fn run_capacity_sweep(
    hurwitz: &PartitionTable,
    gaussian: &PartitionTable,
    snr_db: &[f64],
    samples: usize,
    seed: u64,
) -> Result<CapacityTable> {
    let ch = normalize_constellation(hurwitz)?;
    let cg = normalize_constellation(gaussian)?;
    let rows = snr_db
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let h = constellation_mi(&ch, s, samples, derive_seed(seed, 2 * i as u64));
            let g = constellation_mi(&cg, s, samples, derive_seed(seed, 2 * i as u64 + 1));
            let se = (h.stderr.powi(2) + g.stderr.powi(2)).sqrt();
            let dominance = h.bits - g.bits;
            CapacityRow {
                snr_db: s,
                unrestricted: unrestricted_capacity(s),
                hurwitz: h.bits,
                hurwitz_stderr: h.stderr,
                gaussian: g.bits,
                gaussian_stderr: g.stderr,
                dominance,
                dominance_z: if se > 0.0 { dominance / se } else { 0.0 },
            }
        })
        .collect();
    Ok(CapacityTable { samples, seed, rows })
}
