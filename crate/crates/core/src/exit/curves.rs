//! VND and CND transfer curves.
//!
//! The VND curve is the closed-form mixture `Σ αᵢ J(√(i−1)·J⁻¹(I_A))`. The CND
//! curve is estimated on the all-zero codeword: a-priori messages on the
//! information edges are drawn from the Gaussian model at `σ = J⁻¹(I_A)`, the
//! parity symbols are observed through the channel with a random coset, and
//! one check pass produces the extrinsic messages scored by the mutual
//! information estimator.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::jtable::JTable;
use super::llr::{information_term_prob, LlrModel, PsiZero};
use crate::channel::Demapper;
use crate::codec::check::{CheckKernel, CheckWorkspace};
use crate::codec::ensemble::{apportion, expand};
use crate::codec::message::normalize_in_place;
use crate::error::{Error, Result};
use crate::lattice::{normalize_constellation, Constellation, PartitionTable};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Vnd,
    Cnd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExitCurve {
    pub kind: CurveKind,
    /// ascending `I_A`
    pub grid: Vec<f64>,
    /// `I_E` per grid point
    pub values: Vec<f64>,
    /// Monte-Carlo standard error per grid point; zero for closed forms
    pub stderr: Vec<f64>,
    pub snr_db: Option<f64>,
    pub distribution: BTreeMap<u32, f64>,
}

impl ExitCurve {
    /// Two-column `I_A I_E` text.
    pub fn plot_data(&self) -> String {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(a, e)| format!("{a:.6} {e:.6}\n"))
            .collect()
    }
}

/// `n` equally spaced points on `[0, 1]`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// VND output of a single degree.
pub fn vnd_degree(j: &JTable, degree: u32, i_a: f64) -> f64 {
    if degree <= 1 {
        return 0.0;
    }
    j.j(((degree - 1) as f64).sqrt() * j.j_inv_saturating(i_a))
}

/// `Σ αᵢ J(√(i−1)·J⁻¹(I_A))`.
pub fn vnd_value(j: &JTable, edge_vn: &BTreeMap<u32, f64>, i_a: f64) -> f64 {
    let sigma = j.j_inv_saturating(i_a);
    edge_vn
        .iter()
        .map(|(&d, &a)| a * if d <= 1 { 0.0 } else { j.j(((d - 1) as f64).sqrt() * sigma) })
        .sum()
}

pub fn vnd_curve(edge_vn: &BTreeMap<u32, f64>, grid: &[f64], j: &JTable) -> ExitCurve {
    ExitCurve {
        kind: CurveKind::Vnd,
        grid: grid.to_vec(),
        values: grid.iter().map(|&a| vnd_value(j, edge_vn, a)).collect(),
        stderr: vec![0.0; grid.len()],
        snr_db: None,
        distribution: edge_vn.clone(),
    }
}

/// Scope of the single check pass behind the CND curve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CndMode {
    /// one forward-backward sweep over the whole accumulator chain
    #[default]
    Chain,
    /// each check sees only the channel APPs of its two parity symbols
    Neighborhood,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CndConfig {
    /// check nodes per independent chain
    pub block_checks: usize,
    /// independent chains per grid point
    pub blocks: usize,
    pub seed: u64,
    pub mode: CndMode,
    pub psi_zero: PsiZero,
}

impl Default for CndConfig {
    fn default() -> Self {
        Self {
            block_checks: 500,
            blocks: 20,
            seed: 0xC11D,
            mode: CndMode::Chain,
            psi_zero: PsiZero::Pinned,
        }
    }
}

/// Node fractions of the check degrees.
fn check_node_fractions(edge_cn: &BTreeMap<u32, f64>) -> Result<BTreeMap<u32, f64>> {
    if edge_cn.is_empty() || edge_cn.keys().any(|&d| d == 0) || edge_cn.values().any(|&b| !(b >= 0.0)) {
        return Err(Error::InvalidInput("check distribution needs positive degrees and nonnegative weights".into()));
    }
    let z: f64 = edge_cn.iter().map(|(&d, &b)| b / d as f64).sum();
    Ok(edge_cn.iter().map(|(&d, &b)| (d, b / d as f64 / z)).collect())
}

/// Randomness of one chain, drawn independently of `I_A` and SNR so curves
/// at different operating points share it.
struct Block {
    degrees: Vec<u32>,
    g: Vec<u8>,
    g_prime: Vec<u8>,
    g_dprime: Vec<u8>,
    r: Vec<u8>,
    /// channel normals, `dim` per parity symbol
    noise: Vec<f64>,
    /// `(z, z′)` per information edge, `1 + q` normals each
    llr_normals: Vec<f64>,
    /// uniform variate per information edge selecting its variable-node degree
    edge_u: Vec<f64>,
}

impl Block {
    fn draw(node_cn: &BTreeMap<u32, f64>, checks: usize, table: &PartitionTable, dim: usize, rng: &mut impl Rng) -> Self {
        let q = table.size();
        let mut degrees = expand(&apportion(node_cn, checks));
        degrees.shuffle(rng);
        let edges: usize = degrees.iter().map(|&d| d as usize).sum();
        let mut g = vec![0u8; edges];
        let mut g_prime = vec![0u8; checks];
        let mut g_dprime = vec![0u8; checks];
        let mut a = 0;
        for (n, &j) in degrees.iter().enumerate() {
            let j = j as usize;
            g_prime[n] = rng.random_range(0..q) as u8;
            g_dprime[n] = rng.random_range(0..q) as u8;
            let mut acc = table.add_idx(g_prime[n] as usize, g_dprime[n] as usize);
            for s in a..a + j - 1 {
                g[s] = rng.random_range(0..q) as u8;
                acc = table.add_idx(acc, g[s] as usize);
            }
            g[a + j - 1] = table.neg_idx(acc) as u8;
            a += j;
        }
        let r = (0..checks).map(|_| rng.random_range(0..q) as u8).collect();
        let noise = (0..checks * dim).map(|_| rng.sample(StandardNormal)).collect();
        let llr_normals = (0..edges * (q + 1)).map(|_| rng.sample(StandardNormal)).collect();
        let edge_u = (0..edges).map(|_| rng.random::<f64>()).collect();
        Self {
            degrees,
            g,
            g_prime,
            g_dprime,
            r,
            noise,
            llr_normals,
            edge_u,
        }
    }
}

/// Shared state for CND estimation at one SNR.
pub struct CndEstimator<'a> {
    table: &'a PartitionTable,
    kernel: CheckKernel<f64>,
    constellation: Constellation,
    node_cn: BTreeMap<u32, f64>,
    edge_cn: BTreeMap<u32, f64>,
    config: CndConfig,
    blocks: Vec<Block>,
}

impl<'a> CndEstimator<'a> {
    pub fn new(edge_cn: &BTreeMap<u32, f64>, table: &'a PartitionTable, config: CndConfig) -> Result<Self> {
        if config.block_checks == 0 || config.blocks == 0 {
            return Err(Error::InvalidInput("CND needs at least one check and one block".into()));
        }
        let node_cn = check_node_fractions(edge_cn)?;
        let constellation = normalize_constellation(table)?;
        let dim = constellation.real_dim();
        let blocks = (0..config.blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = rng::stream(config.seed, b as u64);
                Block::draw(&node_cn, config.block_checks, table, dim, &mut rng)
            })
            .collect();
        Ok(Self {
            table,
            kernel: CheckKernel::new(table),
            constellation,
            node_cn,
            edge_cn: edge_cn.clone(),
            config,
            blocks,
        })
    }

    pub fn node_fractions(&self) -> &BTreeMap<u32, f64> {
        &self.node_cn
    }

    /// `(I_E, stderr)` at one a-priori level.
    pub fn point(&self, snr_db: f64, i_a: f64, j: &JTable) -> (f64, f64) {
        let sigma = j.j_inv_saturating(i_a);
        self.estimate(snr_db, &|_| sigma)
    }

    /// `(I_E, stderr)` when each information edge carries the variable-node
    /// output of its own degree: an edge of degree `i` (chosen with
    /// probability `αᵢ`) gets `σ = √(i−1)·J⁻¹(I_in)`, where `I_in` is the
    /// mutual information of the check-to-variable messages.
    pub fn point_mixture(&self, snr_db: f64, i_in: f64, edge_vn: &BTreeMap<u32, f64>, j: &JTable) -> (f64, f64) {
        let base = j.j_inv_saturating(i_in);
        let total: f64 = edge_vn.values().sum();
        let mut cdf = Vec::with_capacity(edge_vn.len());
        let mut acc = 0.0;
        for (&d, &a) in edge_vn {
            acc += a / total;
            cdf.push((acc, (d.max(1) - 1) as f64));
        }
        self.estimate(snr_db, &|u| {
            let k = cdf.partition_point(|c| c.0 <= u).min(cdf.len() - 1);
            cdf[k].1.sqrt() * base
        })
    }

    fn estimate(&self, snr_db: f64, sigma_of: &(dyn Fn(f64) -> f64 + Sync)) -> (f64, f64) {
        let demapper = Demapper::new(&self.constellation, snr_db);
        let amp = crate::channel::db_to_linear(snr_db).sqrt();
        let means: Vec<f64> = self
            .blocks
            .par_iter()
            .map(|b| self.run_block(b, sigma_of, &demapper, amp))
            .collect();
        let n = means.len() as f64;
        let mean = means.iter().sum::<f64>() / n;
        let var = if means.len() > 1 {
            means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        (mean.clamp(0.0, 1.0), (var / n).sqrt())
    }

    pub fn curve(&self, snr_db: f64, grid: &[f64], j: &JTable) -> ExitCurve {
        let pts: Vec<(f64, f64)> = grid.iter().map(|&a| self.point(snr_db, a, j)).collect();
        ExitCurve {
            kind: CurveKind::Cnd,
            grid: grid.to_vec(),
            values: pts.iter().map(|p| p.0).collect(),
            stderr: pts.iter().map(|p| p.1).collect(),
            snr_db: Some(snr_db),
            distribution: self.edge_cn.clone(),
        }
    }

    /// Mean information term over the information edges of one chain.
    fn run_block(&self, b: &Block, sigma_of: &(dyn Fn(f64) -> f64 + Sync), demapper: &Demapper, amp: f64) -> f64 {
        let t = self.table;
        let q = t.size();
        let dim = self.constellation.real_dim();
        let m = b.degrees.len();
        let edges = b.g.len();
        let neg = t.neg_table();

        // coset-removed channel APPs of c_n = 0
        let mut chan = vec![0.0; m * q];
        let mut y = vec![0.0; dim];
        let mut row = vec![0.0; q];
        for n in 0..m {
            let pt = &self.constellation.points[b.r[n] as usize];
            for (d, v) in y.iter_mut().enumerate() {
                *v = amp * pt[d] + std::f64::consts::FRAC_1_SQRT_2 * b.noise[n * dim + d];
            }
            demapper.app_into(&y, &mut row);
            for k in 0..q {
                chan[n * q + k] = row[t.add_idx(k, b.r[n] as usize)];
            }
            normalize_in_place(&mut chan[n * q..(n + 1) * q]);
        }
        // a-priori messages on the information edges
        let mut prior = vec![0.0; edges * q];
        let mut w = vec![0.0; q];
        for e in 0..edges {
            let model = LlrModel {
                sigma: sigma_of(b.edge_u[e]),
                q,
                psi_zero: self.config.psi_zero,
            };
            let zs = &b.llr_normals[e * (q + 1)..(e + 1) * (q + 1)];
            model.fill(zs[0], &zs[1..], &mut w);
            let min = w.iter().copied().fold(f64::INFINITY, f64::min);
            let p = &mut prior[e * q..(e + 1) * q];
            for (o, &x) in p.iter_mut().zip(&w) {
                *o = (min - x).exp();
            }
            normalize_in_place(p);
        }

        let max_j = b.degrees.iter().copied().max().unwrap_or(1) as usize;
        let mut ws: CheckWorkspace<f64> = self.kernel.workspace(max_j + 2);
        let mut outs = vec![vec![0.0; q]; max_j + 2];
        let mut h = Vec::with_capacity(max_j + 2);
        let uniform = vec![1.0 / q as f64; q];
        let mut self_in = vec![0.0; q];
        let mut starts = Vec::with_capacity(m);
        let mut a = 0usize;
        for &d in &b.degrees {
            starts.push(a);
            a += d as usize;
        }

        let chain = self.config.mode == CndMode::Chain;
        // forward messages: alpha[n] is the belief of c_n from checks ≤ n
        let mut alpha = vec![0.0; m * q];
        if chain {
            for n in 0..m {
                let (s0, jn) = (starts[n], b.degrees[n] as usize);
                h.clear();
                let mut inputs: Vec<&[f64]> = Vec::with_capacity(jn + 2);
                for e in s0..s0 + jn {
                    inputs.push(&prior[e * q..(e + 1) * q]);
                    h.push(b.g[e] as usize);
                }
                let constant = if n > 0 {
                    inputs.push(&alpha[(n - 1) * q..n * q]);
                    h.push(b.g_prime[n] as usize);
                    0
                } else {
                    b.g_prime[0] as usize
                };
                inputs.push(&uniform);
                h.push(b.g_dprime[n] as usize);
                let deg = inputs.len();
                self.kernel.update(&inputs, &h, constant, &mut outs[..deg], &mut ws);
                let (_, tail) = alpha.split_at_mut(n * q);
                let dst = &mut tail[..q];
                for (c, d) in dst.iter_mut().enumerate() {
                    *d = chan[n * q + c] * outs[deg - 1][neg[c] as usize];
                }
                normalize_in_place(dst);
            }
        }

        // backward sweep; beta is the message into c_n from checks > n
        let mut beta = uniform.clone();
        let mut next_beta = vec![0.0; q];
        let mut right = vec![0.0; q];
        let mut total = 0.0;
        for n in (0..m).rev() {
            let (s0, jn) = (starts[n], b.degrees[n] as usize);
            for c in 0..q {
                right[c] = chan[n * q + c] * if chain { beta[c] } else { 1.0 };
            }
            normalize_in_place(&mut right);
            for (v, slot) in self_in.iter_mut().enumerate() {
                *slot = right[neg[v] as usize];
            }
            h.clear();
            let mut inputs: Vec<&[f64]> = Vec::with_capacity(jn + 2);
            for e in s0..s0 + jn {
                inputs.push(&prior[e * q..(e + 1) * q]);
                h.push(b.g[e] as usize);
            }
            let constant = if n > 0 {
                let left = if chain { &alpha[(n - 1) * q..n * q] } else { &chan[(n - 1) * q..n * q] };
                inputs.push(left);
                h.push(b.g_prime[n] as usize);
                0
            } else {
                b.g_prime[0] as usize
            };
            inputs.push(&self_in);
            h.push(b.g_dprime[n] as usize);
            let deg = inputs.len();
            self.kernel.update(&inputs, &h, constant, &mut outs[..deg], &mut ws);
            for out in &outs[..jn] {
                total += information_term_prob(out);
            }
            if n > 0 {
                next_beta.copy_from_slice(&outs[jn]);
                std::mem::swap(&mut beta, &mut next_beta);
            }
        }
        total / edges as f64
    }
}

/// CND curve of `edge_cn` at `snr_db` over `grid`.
pub fn cnd_curve(
    edge_cn: &BTreeMap<u32, f64>,
    table: &PartitionTable,
    snr_db: f64,
    grid: &[f64],
    config: CndConfig,
    j: &JTable,
) -> Result<ExitCurve> {
    Ok(CndEstimator::new(edge_cn, table, config)?.curve(snr_db, grid, j))
}
