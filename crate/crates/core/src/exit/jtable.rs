//! Tabulated `J(σ)` with monotone cubic interpolation and a disk cache.

use std::path::PathBuf;
use std::sync::OnceLock;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::llr::{information_term, LlrModel, PsiZero};
use crate::error::{Error, Result};
use crate::rng;

/// Table parameters; also the cache key.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JTableSpec {
    pub q: usize,
    pub sigma_max: f64,
    pub step: f64,
    pub samples: usize,
    pub seed: u64,
    pub psi_zero: PsiZero,
}

impl Default for JTableSpec {
    fn default() -> Self {
        Self {
            q: 25,
            sigma_max: 10.0,
            step: 0.05,
            samples: 1_000_000,
            seed: 0x4A_7AB1E,
            psi_zero: PsiZero::Pinned,
        }
    }
}

impl JTableSpec {
    fn cache_name(&self) -> String {
        format!(
            "j-q{}-max{}-step{}-n{}-seed{}-{:?}.json",
            self.q, self.sigma_max, self.step, self.samples, self.seed, self.psi_zero
        )
        .to_lowercase()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JTable {
    pub spec: JTableSpec,
    pub sigma: Vec<f64>,
    pub values: Vec<f64>,
    /// Fritsch–Carlson tangents
    slopes: Vec<f64>,
}

const CHUNK: usize = 16_384;

impl JTable {
    /// Monte-Carlo table; every grid point shares the same normals, so the
    /// estimate is smooth in `σ`.
    pub fn compute(spec: JTableSpec) -> Self {
        let points = (spec.sigma_max / spec.step).round() as usize + 1;
        let sigma: Vec<f64> = (0..points).map(|i| i as f64 * spec.step).collect();
        let models: Vec<LlrModel> = sigma
            .iter()
            .map(|&s| LlrModel {
                sigma: s,
                q: spec.q,
                psi_zero: spec.psi_zero,
            })
            .collect();
        let chunks = spec.samples.div_ceil(CHUNK);
        let partial: Vec<Vec<f64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let n = CHUNK.min(spec.samples - c * CHUNK);
                let mut rng = rng::stream(spec.seed, c as u64);
                let mut acc = vec![0.0; points];
                let mut zv = vec![0.0; spec.q];
                let mut w = vec![0.0; spec.q];
                for _ in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    for v in zv.iter_mut() {
                        *v = rng.sample(StandardNormal);
                    }
                    for (a, m) in acc.iter_mut().zip(&models) {
                        m.fill(z, &zv, &mut w);
                        *a += information_term(&w);
                    }
                }
                acc
            })
            .collect();
        let mut values = vec![0.0; points];
        for part in &partial {
            for (v, p) in values.iter_mut().zip(part) {
                *v += p;
            }
        }
        for v in values.iter_mut() {
            *v = (*v / spec.samples as f64).clamp(0.0, 1.0);
        }
        Self::from_values(spec, sigma, values)
    }

    fn from_values(spec: JTableSpec, sigma: Vec<f64>, values: Vec<f64>) -> Self {
        let slopes = fritsch_carlson(&sigma, &values);
        Self {
            spec,
            sigma,
            values,
            slopes,
        }
    }

    /// Loads the table from the cache directory or computes and stores it.
    pub fn cached(spec: JTableSpec) -> Result<Self> {
        let dir = cache_dir();
        let path = dir.join(spec.cache_name());
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(t) = serde_json::from_str::<JTable>(&text) {
                if t.spec == spec && t.sigma.len() == t.values.len() {
                    return Ok(Self::from_values(spec, t.sigma, t.values));
                }
            }
        }
        let t = Self::compute(spec);
        std::fs::create_dir_all(&dir)?;
        let tmp = dir.join(format!("{}.{}.tmp", spec.cache_name(), std::process::id()));
        std::fs::write(&tmp, serde_json::to_string(&t)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(t)
    }

    /// Process-wide table for the default spec.
    pub fn standard() -> &'static JTable {
        static TABLE: OnceLock<JTable> = OnceLock::new();
        TABLE.get_or_init(|| Self::cached(JTableSpec::default()).unwrap_or_else(|_| Self::compute(JTableSpec::default())))
    }

    /// SHA-256 of the spec and tabulated values.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(&(&self.spec, &self.values)).expect("table serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn sigma_max(&self) -> f64 {
        *self.sigma.last().expect("nonempty table")
    }

    pub fn i_max(&self) -> f64 {
        *self.values.last().expect("nonempty table")
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }

    /// `J(σ)`; constant beyond the table.
    pub fn j(&self, sigma: f64) -> f64 {
        if sigma <= 0.0 {
            return self.values[0];
        }
        if sigma >= self.sigma_max() {
            return self.i_max();
        }
        let h = self.spec.step;
        let i = ((sigma / h) as usize).min(self.sigma.len() - 2);
        let t = (sigma - self.sigma[i]) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1
    }

    /// `J⁻¹(I)` by bisection on the interpolant.
    pub fn j_inv(&self, info: f64) -> Result<f64> {
        if !(0.0..=self.i_max()).contains(&info) {
            return Err(Error::OutOfRange(info));
        }
        Ok(self.j_inv_saturating(info))
    }

    /// `J⁻¹` with `I` clamped to `[0, J(σ_max)]`.
    pub fn j_inv_saturating(&self, info: f64) -> f64 {
        if info <= self.values[0] {
            return 0.0;
        }
        if info >= self.i_max() {
            return self.sigma_max();
        }
        let i = self.values.partition_point(|&v| v <= info).clamp(1, self.values.len() - 1);
        let (mut lo, mut hi) = (self.sigma[i - 1], self.sigma[i]);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.j(mid) < info {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Cache location: `$IRA_LATTICE_CACHE` or a directory under the system
/// temporary directory.
pub fn cache_dir() -> PathBuf {
    std::env::var_os("IRA_LATTICE_CACHE")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ira-lattice-cache"))
}

/// Tangents of the monotone piecewise-cubic Hermite interpolant.
fn fritsch_carlson(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        m[i] = if d[i - 1] * d[i] <= 0.0 { 0.0 } else { 0.5 * (d[i - 1] + d[i]) };
    }
    for i in 0..n - 1 {
        if d[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let a = m[i] / d[i];
        let b = m[i + 1] / d[i];
        let s = a * a + b * b;
        if s > 9.0 {
            let t = 3.0 / s.sqrt();
            m[i] = t * a * d[i];
            m[i + 1] = t * b * d[i];
        }
    }
    m
}

/// `J` from the standard table.
pub fn j_func(sigma: f64) -> f64 {
    JTable::standard().j(sigma)
}

/// `J⁻¹` from the standard table.
pub fn j_inv(info: f64) -> Result<f64> {
    JTable::standard().j_inv(info)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> JTable {
        JTable::compute(JTableSpec {
            samples: 20_000,
            sigma_max: 10.0,
            ..JTableSpec::default()
        })
    }

    #[test]
    fn endpoints_and_monotonicity() {
        let t = small();
        assert_eq!(t.j(0.0), 0.0);
        assert!(t.i_max() > 0.9999);
        assert!(t.is_strictly_increasing());
    }

    #[test]
    fn round_trip() {
        let t = small();
        for i in 1..190 {
            let s = i as f64 * 0.05 + 0.013;
            let back = t.j_inv(t.j(s)).unwrap();
            assert!((back - s).abs() < 0.02, "{s} -> {back}");
        }
        assert!(t.j_inv(1.5).is_err());
        assert!(t.j_inv(-0.1).is_err());
    }

    #[test]
    fn interpolant_is_monotone_between_knots() {
        let t = small();
        let mut prev = -1.0;
        for i in 0..=10_000 {
            let v = t.j(i as f64 * 0.001);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn fritsch_carlson_reproduces_lines() {
        let x: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!(fritsch_carlson(&x, &y).iter().all(|&m| (m - 2.0).abs() < 1e-12));
    }
}
