//! Unit-energy transmit constellation built from the coset leaders.
//!
//! A leader with real coordinates `(c1, ci, cj, ck)` occupies two complex
//! channel uses, `c1 + j·ci` followed by `cj + j·ck`. Gaussian leaders use one.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::partition::{PartitionTable, RingKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    pub ring: RingKind,
    /// Scaled leaders, one real vector of length `2·complex_dim` per index.
    pub points: Vec<Vec<f64>>,
    /// Factor applied to the raw leaders.
    pub scale: f64,
    /// Mean energy per complex use after scaling.
    pub energy_per_complex_dim: f64,
}

impl Constellation {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn complex_dim(&self) -> usize {
        self.ring.complex_dim()
    }

    pub fn real_dim(&self) -> usize {
        self.ring.real_dim()
    }

    /// Complex channel symbols of point `idx`.
    pub fn complex_symbols(&self, idx: usize) -> Vec<Complex64> {
        self.points[idx]
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect()
    }
}

/// Scales the leaders so the mean energy per complex channel use is 1.
pub fn normalize_constellation(table: &PartitionTable) -> Result<Constellation> {
    let q = table.size();
    if q < 2 {
        return Err(Error::DegenerateConstellation);
    }
    let raw: Vec<Vec<f64>> = (0..q).map(|k| table.leader_f64(k)).collect();
    let cd = table.ring().complex_dim() as f64;
    let mean: f64 = raw
        .iter()
        .map(|p| p.iter().map(|v| v * v).sum::<f64>())
        .sum::<f64>()
        / (q as f64 * cd);
    let scale = 1.0 / mean.sqrt();
    let points: Vec<Vec<f64>> = raw
        .iter()
        .map(|p| p.iter().map(|v| v * scale).collect())
        .collect();
    let energy = points
        .iter()
        .map(|p| p.iter().map(|v| v * v).sum::<f64>())
        .sum::<f64>()
        / (q as f64 * cd);
    Ok(Constellation {
        ring: table.ring(),
        points,
        scale,
        energy_per_complex_dim: energy,
    })
}
