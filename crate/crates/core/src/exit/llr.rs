//! Single-parameter Gaussian model of 25-ary LLR vectors and the
//! all-zero-codeword mutual information.
//!
//! Entries `k ≥ 1` are `w_k = σ²/2 + (σ/√2)(z + z′_k)` with independent
//! standard normals, giving mean `σ²/2`, variance `σ²` and covariance `σ²/2`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::rng;

/// Treatment of the `ψ₀` entry, which is `log(ρ₀/ρ₀) = 0` for any real
/// message.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiZero {
    /// `w_0 = 0`
    #[default]
    Pinned,
    /// `w_0` drawn like every other entry
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlrModel {
    pub sigma: f64,
    pub q: usize,
    pub psi_zero: PsiZero,
}

impl LlrModel {
    pub fn new(sigma: f64) -> Self {
        Self {
            sigma,
            q: 25,
            psi_zero: PsiZero::Pinned,
        }
    }

    pub fn mean(&self) -> f64 {
        self.sigma * self.sigma / 2.0
    }

    /// Fills `w` (length `q`) from one scalar and `q` vector normals.
    #[inline]
    pub fn fill(&self, z: f64, zv: &[f64], w: &mut [f64]) {
        let s = self.sigma * std::f64::consts::FRAC_1_SQRT_2;
        let mu = self.mean();
        for (o, &zk) in w.iter_mut().zip(zv) {
            *o = mu + s * (z + zk);
        }
        if self.psi_zero == PsiZero::Pinned {
            w[0] = 0.0;
        }
    }

    /// Draws one vector.
    pub fn draw(&self, rng: &mut impl Rng, zv: &mut [f64], w: &mut [f64]) {
        let z: f64 = rng.sample(StandardNormal);
        for v in zv.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        self.fill(z, zv, w);
    }
}

/// Row-major `rows × q` LLR samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlrMatrix {
    pub q: usize,
    pub data: Vec<f64>,
}

impl LlrMatrix {
    pub fn rows(&self) -> usize {
        self.data.len() / self.q
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.q..(i + 1) * self.q]
    }
}

/// `count` independent draws from `model`.
pub fn sample_llr(model: &LlrModel, count: usize, seed: u64) -> LlrMatrix {
    let q = model.q;
    let mut rng = rng::stream(seed, 0);
    let mut data = vec![0.0; count * q];
    let mut zv = vec![0.0; q];
    for row in data.chunks_mut(q) {
        model.draw(&mut rng, &mut zv, row);
    }
    LlrMatrix { q, data }
}

/// `1 − log_q Σ_k e^{−w_k}` for one sample.
#[inline]
pub fn information_term(w: &[f64]) -> f64 {
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);
    let s: f64 = w.iter().map(|&x| (min - x).exp()).sum();
    1.0 - (s.ln() - min) / (w.len() as f64).ln()
}

/// `1 + log_q ρ₀` for a normalized message whose true symbol is index 0.
#[inline]
pub fn information_term_prob(p: &[f64]) -> f64 {
    1.0 + p[0].max(f64::MIN_POSITIVE).ln() / (p.len() as f64).ln()
}

/// Sample-mean mutual information, clipped to `[0, 1]`.
pub fn mutual_info(samples: &LlrMatrix) -> f64 {
    let n = samples.rows();
    if n == 0 {
        return 0.0;
    }
    let s: f64 = (0..n).map(|i| information_term(samples.row(i))).sum();
    (s / n as f64).clamp(0.0, 1.0)
}
