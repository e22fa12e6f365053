//! Finite-length realization of an `(α, β, ξ, ring)` ensemble.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::degree::DegreeDistribution;
use crate::error::{Error, Result};
use crate::lattice::PartitionTable;

/// Largest allowed gap between a realized and a requested edge fraction. A
/// class of degree `i` is also allowed the weight `i/L` of a single node.
pub const REALIZATION_TOLERANCE: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeEnsemble {
    pub degree: DegreeDistribution,
    pub partition: PartitionTable,
    /// information symbols
    pub k: usize,
    /// transmitted symbols (= check nodes = parity nodes)
    pub n: usize,
    /// interleaver edges
    pub l: usize,
    /// degree of every information node, nondecreasing
    pub vn_degrees: Vec<u32>,
    /// information-edge count of every check node, nondecreasing
    pub cn_degrees: Vec<u32>,
    /// bits per complex channel use
    pub design_rate: f64,
}

impl CodeEnsemble {
    pub fn q(&self) -> usize {
        self.partition.size()
    }

    /// Realized `K/N`.
    pub fn code_rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Realized edge fractions by information-node degree.
    pub fn realized_edge_vn(&self) -> BTreeMap<u32, f64> {
        edge_fractions(&self.vn_degrees, self.l)
    }

    pub fn realized_edge_cn(&self) -> BTreeMap<u32, f64> {
        edge_fractions(&self.cn_degrees, self.l)
    }
}

fn edge_fractions(degrees: &[u32], l: usize) -> BTreeMap<u32, f64> {
    let mut out = BTreeMap::new();
    for &d in degrees {
        *out.entry(d).or_insert(0.0) += d as f64 / l as f64;
    }
    out
}

/// Node counts per degree summing to `total`, by largest remainder.
pub(crate) fn apportion(fractions: &BTreeMap<u32, f64>, total: usize) -> Vec<(u32, usize)> {
    let exact: Vec<(u32, f64)> = fractions
        .iter()
        .map(|(&d, &f)| (d, f * total as f64))
        .collect();
    let mut counts: Vec<(u32, usize)> = exact.iter().map(|&(d, x)| (d, x.floor() as usize)).collect();
    let assigned: usize = counts.iter().map(|c| c.1).sum();
    let mut order: Vec<usize> = (0..exact.len()).collect();
    // larger remainder first, higher degree on ties
    order.sort_by(|&a, &b| {
        let ra = exact[a].1 - exact[a].1.floor();
        let rb = exact[b].1 - exact[b].1.floor();
        rb.total_cmp(&ra).then(exact[b].0.cmp(&exact[a].0))
    });
    for &idx in order.iter().take(total.saturating_sub(assigned)) {
        counts[idx].1 += 1;
    }
    counts
}

pub(crate) fn expand(counts: &[(u32, usize)]) -> Vec<u32> {
    counts
        .iter()
        .flat_map(|&(d, c)| std::iter::repeat_n(d, c))
        .collect()
}

/// Realizes the ensemble with `n` check nodes.
///
/// Check-node counts are apportioned from `b_j·N`, fixing `L`. `K` is the
/// nearest integer to `L·Σαᵢ/i`, information-node counts are apportioned from
/// `f_i·K`, and the remaining edge surplus or deficit is spread one edge at a
/// time over the highest-degree information nodes, which keep their class.
pub fn make_ensemble(
    edge_vn: &BTreeMap<u32, f64>,
    edge_cn: &BTreeMap<u32, f64>,
    partition: &PartitionTable,
    n: usize,
) -> Result<CodeEnsemble> {
    let degree = DegreeDistribution::from_edge(edge_vn, edge_cn)?;
    if n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    let cn_degrees = expand(&apportion(&degree.node_cn, n));
    let l: usize = cn_degrees.iter().map(|&d| d as usize).sum();
    let k = (l as f64 * degree.vn_nodes_per_edge()).round() as usize;
    if k == 0 {
        return Err(Error::Unrealizable(format!("N = {n} leaves no information symbols")));
    }
    let mut vn_degrees = expand(&apportion(&degree.node_vn, k));
    // the class of every node stays its nominal degree
    let classes = vn_degrees.clone();
    let mut surplus = l as i64 - vn_degrees.iter().map(|&d| d as i64).sum::<i64>();
    let mut idx = k;
    while surplus != 0 {
        idx = if idx == 0 { k - 1 } else { idx - 1 };
        if surplus > 0 {
            vn_degrees[idx] += 1;
            surplus -= 1;
        } else {
            if vn_degrees.iter().all(|&d| d <= 2) {
                return Err(Error::Unrealizable(format!(
                    "cannot remove {} edges without creating degree-1 nodes",
                    -surplus
                )));
            }
            if vn_degrees[idx] > 2 {
                vn_degrees[idx] -= 1;
                surplus += 1;
            }
        }
    }
    let mut by_class: BTreeMap<u32, f64> = BTreeMap::new();
    for (&c, &d) in classes.iter().zip(&vn_degrees) {
        *by_class.entry(c).or_insert(0.0) += d as f64 / l as f64;
    }
    check_realization(&degree.edge_vn, &by_class, l, "variable")?;
    vn_degrees.sort_unstable();

    let ensemble = CodeEnsemble {
        design_rate: k as f64 / n as f64 * (partition.size() as f64).log2()
            / partition.ring().complex_dim() as f64,
        degree,
        partition: partition.clone(),
        k,
        n,
        l,
        vn_degrees,
        cn_degrees,
    };
    check_realization(&ensemble.degree.edge_cn, &ensemble.realized_edge_cn(), l, "check")?;
    Ok(ensemble)
}

/// Compares per-class edge fractions.
fn check_realization(target: &BTreeMap<u32, f64>, realized: &BTreeMap<u32, f64>, l: usize, side: &str) -> Result<()> {
    for (&d, &t) in target {
        let r = realized.get(&d).copied().unwrap_or(0.0);
        if (r - t).abs() > REALIZATION_TOLERANCE + d as f64 / l as f64 {
            return Err(Error::Unrealizable(format!(
                "{side}-node degree {d}: realized edge fraction {r:.4} vs requested {t:.4}"
            )));
        }
    }
    Ok(())
}
