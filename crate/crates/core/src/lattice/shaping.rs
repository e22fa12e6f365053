//! Normalized second moment by Monte Carlo.
//!
//! Points drawn uniformly from the unit cube are reduced modulo the lattice
//! with its nearest-point quantizer. The cube is a fundamental region of ℤⁿ,
//! a sublattice of every lattice here, so the reduced points are uniform on
//! the Voronoi cell.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quantize::{nearest_gaussian, nearest_hurwitz_doubled};
use crate::error::{Error, Result};
use crate::rng;

/// Samples per independently seeded chunk.
const CHUNK: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapingLattice {
    /// ℤⁿ
    Cubic(usize),
    Hurwitz,
    Gaussian,
}

impl ShapingLattice {
    pub fn dim(self) -> usize {
        match self {
            ShapingLattice::Cubic(n) => n,
            ShapingLattice::Hurwitz => 4,
            ShapingLattice::Gaussian => 2,
        }
    }

    /// Volume of the fundamental region.
    pub fn volume(self) -> f64 {
        match self {
            ShapingLattice::Hurwitz => 0.5,
            _ => 1.0,
        }
    }

    /// Squared distance from `x` to its nearest lattice point.
    fn error_energy(self, x: &[f64]) -> f64 {
        match self {
            ShapingLattice::Cubic(_) => x.iter().map(|v| (v - v.round()).powi(2)).sum(),
            ShapingLattice::Hurwitz => {
                let p = [x[0], x[1], x[2], x[3]];
                let q = nearest_hurwitz_doubled(&p).expect("finite sample");
                (0..4).map(|i| (p[i] - q[i] as f64 / 2.0).powi(2)).sum()
            }
            ShapingLattice::Gaussian => {
                let q = nearest_gaussian(&[x[0], x[1]]).expect("finite sample");
                (x[0] - q[0] as f64).powi(2) + (x[1] - q[1] as f64).powi(2)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NsmEstimate {
    pub nsm: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Estimates `G = E‖e‖² / (n · Vol^{2/n})`, `e` uniform on the Voronoi cell.
///
/// The result depends only on `(lattice, samples, seed)`, not on the thread
/// count.
pub fn nsm_estimate(lattice: ShapingLattice, samples: usize, seed: u64) -> Result<NsmEstimate> {
    let n = lattice.dim();
    if n == 0 || samples < 2 {
        return Err(Error::InvalidInput("need n > 0 and at least two samples".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(samples - c * CHUNK);
            let mut rng = rng::stream(seed, c as u64);
            let mut x = vec![0.0; n];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for v in x.iter_mut() {
                    *v = rng.random::<f64>();
                }
                let e = lattice.error_energy(&x) / n as f64;
                s += e;
                s2 += e * e;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = partial
        .iter()
        .fold((0.0, 0.0), |(a, b), &(c, d)| (a + c, b + d));
    let m = samples as f64;
    let mean = s / m;
    let var = (s2 / m - mean * mean).max(0.0) * m / (m - 1.0);
    let norm = lattice.volume().powf(2.0 / n as f64);
    Ok(NsmEstimate {
        nsm: mean / norm,
        stderr: (var / m).sqrt() / norm,
        samples,
    })
}

/// Gain of a region with second moment `nsm` over the cube, in dB.
pub fn shaping_gain(nsm: f64) -> Result<f64> {
    if !(nsm > 0.0) || !nsm.is_finite() {
        return Err(Error::OutOfRange(nsm));
    }
    Ok(10.0 * ((1.0 / 12.0) / nsm).log10())
}
