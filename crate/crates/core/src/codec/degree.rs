//! Degree distributions in node and edge perspective.
//!
//! Variable-node degrees `i ≥ 2` count interleaver edges of an information
//! node. Check-node degrees `j ≥ 1` count information edges of a check; each
//! check also has two parity edges that are not part of the distribution.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input sums further than this from 1 are rejected rather than renormalized.
pub const SUM_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    /// fraction `f_i` of information nodes with degree `i`
    pub node_vn: BTreeMap<u32, f64>,
    /// fraction `b_j` of check nodes with `j` information edges
    pub node_cn: BTreeMap<u32, f64>,
    /// fraction `α_i` of interleaver edges on degree-`i` information nodes
    pub edge_vn: BTreeMap<u32, f64>,
    /// fraction `β_j` of interleaver edges on checks with `j` information edges
    pub edge_cn: BTreeMap<u32, f64>,
}

impl DegreeDistribution {
    /// Builds both perspectives from edge fractions. Each map is renormalized
    /// to sum to exactly 1 after checking it is within [`SUM_TOLERANCE`].
    pub fn from_edge(edge_vn: &BTreeMap<u32, f64>, edge_cn: &BTreeMap<u32, f64>) -> Result<Self> {
        let edge_vn = normalized(edge_vn, 2, "variable-node")?;
        let edge_cn = normalized(edge_cn, 1, "check-node")?;
        Ok(Self {
            node_vn: edge_to_node(&edge_vn),
            node_cn: edge_to_node(&edge_cn),
            edge_vn,
            edge_cn,
        })
    }

    /// Builds both perspectives from node fractions.
    pub fn from_node(node_vn: &BTreeMap<u32, f64>, node_cn: &BTreeMap<u32, f64>) -> Result<Self> {
        let node_vn = normalized(node_vn, 2, "variable-node")?;
        let node_cn = normalized(node_cn, 1, "check-node")?;
        Ok(Self {
            edge_vn: node_to_edge(&node_vn),
            edge_cn: node_to_edge(&node_cn),
            node_vn,
            node_cn,
        })
    }

    /// `Σ αᵢ/i`, information nodes per edge.
    pub fn vn_nodes_per_edge(&self) -> f64 {
        inverse_mean(&self.edge_vn)
    }

    /// `Σ βⱼ/j`, check nodes per edge.
    pub fn cn_nodes_per_edge(&self) -> f64 {
        inverse_mean(&self.edge_cn)
    }

    /// Asymptotic `K/N`.
    pub fn rate_ratio(&self) -> f64 {
        self.vn_nodes_per_edge() / self.cn_nodes_per_edge()
    }

    pub fn max_vn_degree(&self) -> u32 {
        *self.edge_vn.keys().last().expect("nonempty")
    }

    pub fn max_cn_degree(&self) -> u32 {
        *self.edge_cn.keys().last().expect("nonempty")
    }
}

fn inverse_mean(edge: &BTreeMap<u32, f64>) -> f64 {
    edge.iter().map(|(&d, &w)| w / d as f64).sum()
}

fn edge_to_node(edge: &BTreeMap<u32, f64>) -> BTreeMap<u32, f64> {
    let total = inverse_mean(edge);
    edge.iter()
        .map(|(&d, &w)| (d, w / d as f64 / total))
        .collect()
}

fn node_to_edge(node: &BTreeMap<u32, f64>) -> BTreeMap<u32, f64> {
    let total: f64 = node.iter().map(|(&d, &w)| w * d as f64).sum();
    node.iter()
        .map(|(&d, &w)| (d, w * d as f64 / total))
        .collect()
}

fn normalized(map: &BTreeMap<u32, f64>, min_degree: u32, side: &str) -> Result<BTreeMap<u32, f64>> {
    let bad = |msg: String| Error::InvalidInput(format!("{side} distribution: {msg}"));
    if map.is_empty() {
        return Err(bad("empty".into()));
    }
    for (&d, &w) in map {
        if d < min_degree {
            return Err(bad(format!("degree {d} below minimum {min_degree}")));
        }
        if !(w >= 0.0) || !w.is_finite() {
            return Err(bad(format!("weight {w} for degree {d}")));
        }
    }
    let sum: f64 = map.values().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(bad(format!("weights sum to {sum}")));
    }
    Ok(map
        .iter()
        .filter(|(_, &w)| w > 0.0)
        .map(|(&d, &w)| (d, w / sum))
        .collect())
}

/// Parses `"2:0.5,3:0.5"` into a degree map.
pub fn parse_degree_map(s: &str) -> Result<BTreeMap<u32, f64>> {
    let bad = || Error::InvalidInput(format!("cannot parse degree map {s:?}"));
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (d, w) = t.split_once(':').ok_or_else(bad)?;
            Ok((
                d.trim().parse().map_err(|_| bad())?,
                w.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(v: &[(u32, f64)]) -> BTreeMap<u32, f64> {
        v.iter().copied().collect()
    }

    #[test]
    fn perspectives_are_consistent() {
        let d = DegreeDistribution::from_edge(&map(&[(2, 0.5), (4, 0.5)]), &map(&[(1, 0.25), (3, 0.75)]))
            .unwrap();
        // α ∝ i·f: f₂ ∝ 0.25, f₄ ∝ 0.125
        assert!((d.node_vn[&2] - 2.0 / 3.0).abs() < 1e-12);
        assert!((d.node_cn[&1] - 0.5).abs() < 1e-12);
        let back = DegreeDistribution::from_node(&d.node_vn, &d.node_cn).unwrap();
        for (k, v) in &d.edge_vn {
            assert!((back.edge_vn[k] - v).abs() < 1e-12);
        }
        assert!((d.node_vn.values().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn regular_ratio_is_one() {
        let d = DegreeDistribution::from_edge(&map(&[(3, 1.0)]), &map(&[(3, 1.0)])).unwrap();
        assert_eq!(d.rate_ratio(), 1.0);
    }

    #[test]
    fn invalid_maps_are_rejected() {
        let cn = map(&[(3, 1.0)]);
        assert!(DegreeDistribution::from_edge(&map(&[(1, 1.0)]), &cn).is_err());
        assert!(DegreeDistribution::from_edge(&map(&[(2, 0.7)]), &cn).is_err());
        assert!(DegreeDistribution::from_edge(&map(&[(2, -0.1), (3, 1.1)]), &cn).is_err());
        assert!(DegreeDistribution::from_edge(&BTreeMap::new(), &cn).is_err());
    }

    #[test]
    fn parse() {
        assert_eq!(parse_degree_map("2:0.5, 3:0.5").unwrap(), map(&[(2, 0.5), (3, 0.5)]));
        assert!(parse_degree_map("2-0.5").is_err());
    }
}
