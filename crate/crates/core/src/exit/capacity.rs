//! Uniform-input constellation capacity and the unrestricted Shannon limit.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::db_to_linear;
use crate::error::{Error, Result};
use crate::lattice::Constellation;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiEstimate {
    /// bits per complex dimension
    pub bits: f64,
    pub stderr: f64,
    pub samples: usize,
}

const CHUNK: usize = 8192;

/// Monte-Carlo `I(X;Y)` per complex dimension for a uniform input over the
/// constellation at `snr_db`.
pub fn constellation_mi(constellation: &Constellation, snr_db: f64, samples: usize, seed: u64) -> MiEstimate {
    let amp = db_to_linear(snr_db).sqrt();
    let pts: Vec<Vec<f64>> = constellation
        .points
        .iter()
        .map(|p| p.iter().map(|v| v * amp).collect())
        .collect();
    let m = pts.len();
    let dim = constellation.real_dim();
    let cdim = constellation.complex_dim() as f64;
    let sigma = std::f64::consts::FRAC_1_SQRT_2;
    let chunks = samples.div_ceil(CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = CHUNK.min(samples - c * CHUNK);
            let mut rng = rng::stream(seed, c as u64);
            let mut noise = vec![0.0; dim];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let x = rng.random_range(0..m);
                for v in noise.iter_mut() {
                    *v = sigma * rng.sample::<f64, _>(StandardNormal);
                }
                let n2: f64 = noise.iter().map(|v| v * v).sum();
                // log Σ_k exp(‖n‖² − ‖y − s_k‖²) with y = s_x + n
                let mut terms = Vec::with_capacity(m);
                for p in &pts {
                    let d2: f64 = (0..dim).map(|d| (pts[x][d] + noise[d] - p[d]).powi(2)).sum();
                    terms.push(n2 - d2);
                }
                let mx = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = mx + terms.iter().map(|t| (t - mx).exp()).sum::<f64>().ln();
                let v = (m as f64).log2() - lse / std::f64::consts::LN_2;
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples.max(1) as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0);
    MiEstimate {
        bits: mean / cdim,
        stderr: (var / n).sqrt() / cdim,
        samples,
    }
}

/// `log₂(1 + SNR)`.
pub fn unrestricted_capacity(snr_db: f64) -> f64 {
    (1.0 + db_to_linear(snr_db)).log2()
}

/// SNR in dB at which `log₂(1 + SNR)` equals `rate`.
pub fn shannon_limit(rate: f64) -> Result<f64> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidInput(format!("rate {rate} must be positive")));
    }
    Ok(10.0 * (2f64.powf(rate) - 1.0).log10())
}
