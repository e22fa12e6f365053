//! Variable-degree optimization by linear programming on the EXIT chart.
//!
//! With a fixed check-side transfer curve `C_eff(x)` the tunnel condition
//! `Σ αᵢ vᵢ(C_eff(x)) ≥ x + gap` is linear in `α`. The first round uses the
//! single-Gaussian check curve; later rounds rebuild `C_eff` from the current
//! `α` as the pairs `(V(y), C_mix(y))`, on which the tunnel test is exact for
//! the mixture model. Between rounds the check distribution may be nudged.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::curves::{uniform_grid, vnd_degree, vnd_value, CndConfig, CndEstimator};
use super::jtable::JTable;
use super::simplex::{LinearProgram, LpOutcome, Relation};
use super::threshold::{tunnel_with, ExitModel, ThresholdConfig};
use crate::error::{Error, Result};
use crate::lattice::PartitionTable;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// minimum vertical gap between the curves
    pub gap: f64,
    pub outer_iterations: usize,
    pub grid_size: usize,
    pub lp_tolerance: f64,
    /// candidate variable degrees are `2..=max_degree`
    pub max_degree: u32,
    /// relative step for the degree-1 check fraction between rounds; 0
    /// keeps the check distribution fixed
    pub cn_step: f64,
    pub cnd: CndConfig,
    pub model: ExitModel,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            gap: 1e-4,
            outer_iterations: 10,
            grid_size: 101,
            lp_tolerance: 1e-10,
            max_degree: 40,
            cn_step: 0.05,
            cnd: CndConfig::default(),
            model: ExitModel::Mixture,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizedDistribution {
    pub edge_vn: BTreeMap<u32, f64>,
    pub edge_cn: BTreeMap<u32, f64>,
    /// `K/N` of the pair
    pub rate: f64,
    /// smallest tunnel margin under the configured model
    pub min_margin: f64,
    /// `Σ_x (V(C(x)) − x)` over the grid
    pub area: f64,
    pub rounds: usize,
}

fn sum_over_degree(d: &BTreeMap<u32, f64>) -> f64 {
    d.iter().map(|(&k, &v)| v / k as f64).sum()
}

/// Check curve sampled on the `x` grid.
struct CheckCurve {
    x: Vec<f64>,
    c: Vec<f64>,
}

impl CheckCurve {
    fn gaussian(est: &CndEstimator, snr_db: f64, grid: &[f64], j: &JTable) -> Self {
        Self {
            x: grid.to_vec(),
            c: grid.iter().map(|&x| est.point(snr_db, x, j).0).collect(),
        }
    }

    /// `C_eff` on `grid` from `(V(y), C_mix(y))` pairs.
    fn mixture(est: &CndEstimator, alpha: &BTreeMap<u32, f64>, snr_db: f64, grid: &[f64], j: &JTable) -> Self {
        let ys = uniform_grid(grid.len());
        let mut xs: Vec<f64> = ys.iter().map(|&y| vnd_value(j, alpha, y)).collect();
        let cs: Vec<f64> = ys.iter().map(|&y| est.point_mixture(snr_db, y, alpha, j).0).collect();
        for i in 1..xs.len() {
            if xs[i] < xs[i - 1] {
                xs[i] = xs[i - 1];
            }
        }
        let c = grid
            .iter()
            .map(|&x| {
                let k = xs.partition_point(|&v| v < x);
                if k == 0 {
                    cs[0]
                } else if k >= xs.len() {
                    *cs.last().unwrap()
                } else {
                    let (x0, x1) = (xs[k - 1], xs[k]);
                    let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 1.0 };
                    cs[k - 1] + t * (cs[k] - cs[k - 1])
                }
            })
            .collect();
        Self { x: grid.to_vec(), c }
    }
}

enum Lp {
    /// minimize the area subject to the gap
    Area,
    /// maximize the smallest gap
    Margin,
}

/// Solves one linear program over `α` for a fixed check curve. Returns the
/// distribution and the smallest gap it achieves.
fn solve_lp(
    curve: &CheckCurve,
    degrees: &[u32],
    rate_sum: f64,
    gap: f64,
    kind: Lp,
    tol: f64,
    j: &JTable,
) -> Result<Option<(Vec<f64>, f64)>> {
    let nd = degrees.len();
    let points: Vec<usize> = (0..curve.x.len()).filter(|&g| curve.x[g] < 1.0).collect();
    let v: Vec<Vec<f64>> = points
        .iter()
        .map(|&g| degrees.iter().map(|&d| vnd_degree(j, d, curve.c[g])).collect())
        .collect();
    // variables: α (nd), then t⁺, t⁻ for the margin program
    let width = match kind {
        Lp::Area => nd,
        Lp::Margin => nd + 2,
    };
    let objective = match kind {
        Lp::Area => (0..nd).map(|i| v.iter().map(|row| row[i]).sum()).collect(),
        Lp::Margin => {
            let mut o = vec![0.0; width];
            o[nd] = -1.0;
            o[nd + 1] = 1.0;
            o
        }
    };
    let mut lp = LinearProgram::new(objective);
    let pad = |mut r: Vec<f64>| {
        r.resize(width, 0.0);
        r
    };
    lp.push(pad(vec![1.0; nd]), Relation::Eq, 1.0);
    lp.push(pad(degrees.iter().map(|&d| 1.0 / d as f64).collect()), Relation::Eq, rate_sum);
    for (row, &g) in v.iter().zip(&points) {
        let mut r = pad(row.clone());
        match kind {
            Lp::Area => lp.push(r, Relation::Ge, curve.x[g] + gap),
            Lp::Margin => {
                r[nd] = -1.0;
                r[nd + 1] = 1.0;
                lp.push(r, Relation::Ge, curve.x[g]);
            }
        }
    }
    if let Lp::Margin = kind {
        // keeps the margin program bounded
        let mut r = vec![0.0; width];
        r[nd] = 1.0;
        lp.push(r, Relation::Le, 1.0);
    }
    match lp.solve(tol)? {
        LpOutcome::Optimal(s) => {
            let alpha = s.x[..nd].to_vec();
            let min_gap = v
                .iter()
                .zip(&points)
                .map(|(row, &g)| row.iter().zip(&alpha).map(|(a, b)| a * b).sum::<f64>() - curve.x[g])
                .fold(f64::INFINITY, f64::min);
            Ok(Some((alpha, min_gap)))
        }
        LpOutcome::Infeasible | LpOutcome::Unbounded => Ok(None),
    }
}

fn to_map(degrees: &[u32], alpha: &[f64]) -> BTreeMap<u32, f64> {
    let kept: Vec<(u32, f64)> = degrees
        .iter()
        .zip(alpha)
        .filter(|(_, &a)| a > 1e-7)
        .map(|(&d, &a)| (d, a))
        .collect();
    let s: f64 = kept.iter().map(|x| x.1).sum();
    kept.into_iter().map(|(d, a)| (d, a / s)).collect()
}

fn area(curve: &CheckCurve, alpha: &BTreeMap<u32, f64>, j: &JTable) -> f64 {
    curve
        .x
        .iter()
        .zip(&curve.c)
        .filter(|(x, _)| **x < 1.0)
        .map(|(&x, &c)| vnd_value(j, alpha, c) - x)
        .sum()
}

/// Candidate check distributions around `edge_cn`, varying the fraction of
/// the lowest degree against the rest.
fn cn_candidates(edge_cn: &BTreeMap<u32, f64>, step: f64) -> Vec<BTreeMap<u32, f64>> {
    let mut out = vec![edge_cn.clone()];
    if step <= 0.0 || edge_cn.len() < 2 {
        return out;
    }
    let (&d0, &b0) = edge_cn.iter().next().expect("nonempty");
    for f in [1.0 - step, 1.0 + step] {
        let nb = (b0 * f).clamp(1e-6, 1.0 - 1e-6);
        let scale = (1.0 - nb) / (1.0 - b0);
        out.push(
            edge_cn
                .iter()
                .map(|(&d, &b)| (d, if d == d0 { nb } else { b * scale }))
                .collect(),
        );
    }
    out
}

/// Optimizes `α` for the check distribution `edge_cn` at `snr_db` and the
/// code rate `K/N = rate_target`.
pub fn optimize_degrees(
    edge_cn: &BTreeMap<u32, f64>,
    table: &PartitionTable,
    snr_db: f64,
    rate_target: f64,
    config: &OptimizerConfig,
    j: &JTable,
) -> Result<OptimizedDistribution> {
    if !(config.gap > 0.0) {
        return Err(Error::InvalidInput("gap must be positive".into()));
    }
    if !(rate_target > 0.0) {
        return Err(Error::InvalidInput("rate must be positive".into()));
    }
    let degrees: Vec<u32> = (2..=config.max_degree.max(2)).collect();
    let grid = uniform_grid(config.grid_size);
    let tcfg = ThresholdConfig {
        grid_size: config.grid_size,
        cnd: config.cnd,
        model: config.model,
        ..ThresholdConfig::default()
    };
    let mut beta = edge_cn.clone();
    let mut step = config.cn_step;
    let mut best: Option<OptimizedDistribution> = None;
    let mut best_margin = f64::NEG_INFINITY;
    let mut alpha: Option<BTreeMap<u32, f64>> = None;

    for round in 0..config.outer_iterations.max(1) {
        let mut round_best: Option<(BTreeMap<u32, f64>, BTreeMap<u32, f64>, f64, f64)> = None;
        for cand in cn_candidates(&beta, step) {
            let rate_sum = rate_target * sum_over_degree(&cand);
            if rate_sum >= 0.5 {
                // Σαᵢ/i ≤ 1/2 for degrees ≥ 2
                continue;
            }
            let est = CndEstimator::new(&cand, table, config.cnd)?;
            let curve = match (&alpha, config.model) {
                (Some(a), ExitModel::Mixture) => CheckCurve::mixture(&est, a, snr_db, &grid, j),
                _ => CheckCurve::gaussian(&est, snr_db, &grid, j),
            };
            let sol = match solve_lp(&curve, &degrees, rate_sum, config.gap, Lp::Area, config.lp_tolerance, j)? {
                Some(s) => Some(s),
                None => solve_lp(&curve, &degrees, rate_sum, config.gap, Lp::Margin, config.lp_tolerance, j)?,
            };
            let Some((a, _)) = sol else { continue };
            let a = to_map(&degrees, &a);
            let report = tunnel_with(&est, &a, snr_db, &tcfg, j, true);
            let ar = area(&curve, &a, j);
            let better = match &round_best {
                None => true,
                Some((_, _, m, _)) => report.min_margin > *m,
            };
            if better {
                round_best = Some((a, cand, report.min_margin, ar));
            }
        }
        let Some((a, cand, margin, ar)) = round_best else { break };
        if margin > best_margin {
            best_margin = margin;
            let rate = sum_over_degree(&a) / sum_over_degree(&cand);
            let candidate = OptimizedDistribution {
                edge_vn: a.clone(),
                edge_cn: cand.clone(),
                rate,
                min_margin: margin,
                area: ar,
                rounds: round + 1,
            };
            if margin >= 0.0 {
                best = Some(candidate);
            }
        }
        if cand == beta {
            step *= 0.5;
        }
        beta = cand;
        alpha = Some(a);
    }
    best.ok_or(Error::Infeasible {
        snr_db,
        margin: best_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{DegreeDistribution, Preset};
    use crate::exit::threshold::tunnel;
    use crate::exit::jtable::JTableSpec;

    fn small(cn_step: f64) -> (JTable, OptimizerConfig) {
        let j = JTable::compute(JTableSpec {
            samples: 20_000,
            ..JTableSpec::default()
        });
        let cfg = OptimizerConfig {
            grid_size: 21,
            outer_iterations: 2,
            max_degree: 12,
            cn_step,
            cnd: CndConfig {
                block_checks: 200,
                blocks: 2,
                ..CndConfig::default()
            },
            ..OptimizerConfig::default()
        };
        (j, cfg)
    }

    #[test]
    fn feasible_design_meets_its_constraints() {
        let (j, cfg) = small(0.0);
        let t = PartitionTable::hurwitz_1_2i();
        let cn = Preset::Rate1_2.edge_cn();
        let d = optimize_degrees(&cn, &t, 4.0, 0.5, &cfg, &j).unwrap();
        assert!((d.edge_vn.values().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(d.edge_vn.keys().all(|&k| (2..=12).contains(&k)));
        assert!(d.edge_vn.values().all(|&a| a > 0.0));
        assert_eq!(d.edge_cn, cn);
        let ratio = DegreeDistribution::from_edge(&d.edge_vn, &d.edge_cn).unwrap().rate_ratio();
        assert!((ratio - 0.5).abs() < 1e-6, "{ratio}");
        assert!((d.rate - 0.5).abs() < 1e-6);
        assert!(d.min_margin >= 0.0);
        let report = tunnel(&d.edge_vn, &d.edge_cn, &t, 4.0, &ThresholdConfig { grid_size: 21, cnd: cfg.cnd, ..ThresholdConfig::default() }, &j).unwrap();
        assert!(report.open);
    }

    #[test]
    fn low_snr_is_infeasible() {
        let (j, cfg) = small(0.05);
        let t = PartitionTable::hurwitz_1_2i();
        let r = optimize_degrees(&Preset::Rate3_4.edge_cn(), &t, -3.0, 0.75, &cfg, &j);
        match r {
            Err(Error::Infeasible { margin, .. }) => assert!(margin < 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let (j, mut cfg) = small(0.0);
        let t = PartitionTable::hurwitz_1_2i();
        let cn = Preset::Rate1_2.edge_cn();
        assert!(optimize_degrees(&cn, &t, 4.0, 0.0, &cfg, &j).is_err());
        cfg.gap = 0.0;
        assert!(optimize_degrees(&cn, &t, 4.0, 0.5, &cfg, &j).is_err());
    }
}
