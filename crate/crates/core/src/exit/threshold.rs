//! Tunnel test and decoding-threshold bisection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::curves::{uniform_grid, vnd_value, CndConfig, CndEstimator};
use super::jtable::JTable;
use crate::error::{Error, Result};
use crate::lattice::PartitionTable;

/// How the check-node input is modeled when testing the tunnel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExitModel {
    /// each information edge carries the Gaussian output of its own
    /// variable-node degree; the recursion `y ↦ C(y)` runs on the
    /// check-to-variable information
    #[default]
    Mixture,
    /// one Gaussian with the mixture's average information on every edge;
    /// the tunnel is `V(C(x)) > x`
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub grid_size: usize,
    pub cnd: CndConfig,
    pub model: ExitModel,
    pub lo_db: f64,
    pub hi_db: f64,
    pub resolution_db: f64,
    /// a grid point passes when `margin + stderr_factor·stderr > 0`
    pub stderr_factor: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            grid_size: 101,
            cnd: CndConfig::default(),
            model: ExitModel::Mixture,
            lo_db: -5.0,
            hi_db: 15.0,
            resolution_db: 0.01,
            stderr_factor: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TunnelReport {
    pub snr_db: f64,
    pub open: bool,
    /// smallest margin over the evaluated points
    pub min_margin: f64,
    /// grid value where the smallest margin occurred
    pub argmin: f64,
    /// grid points evaluated before stopping
    pub evaluated: usize,
}

/// Tunnel margin at one grid value: `(margin, stderr)`.
fn margin_at(
    est: &CndEstimator,
    edge_vn: &BTreeMap<u32, f64>,
    snr_db: f64,
    a: f64,
    model: ExitModel,
    j: &JTable,
) -> (f64, f64) {
    match model {
        ExitModel::Mixture => {
            let (c, se) = est.point_mixture(snr_db, a, edge_vn, j);
            (c - a, se)
        }
        ExitModel::Gaussian => {
            let (c, se) = est.point(snr_db, a, j);
            let v = vnd_value(j, edge_vn, c);
            let h = 1e-4;
            let slope = (vnd_value(j, edge_vn, (c + h).min(1.0)) - vnd_value(j, edge_vn, (c - h).max(0.0))) / (2.0 * h);
            (v - a, slope.abs() * se)
        }
    }
}

/// Checks the tunnel on every grid point below 1, stopping at the first
/// closed point unless `full` is set.
pub fn tunnel_with(
    est: &CndEstimator,
    edge_vn: &BTreeMap<u32, f64>,
    snr_db: f64,
    config: &ThresholdConfig,
    j: &JTable,
    full: bool,
) -> TunnelReport {
    let grid = uniform_grid(config.grid_size);
    let mut report = TunnelReport {
        snr_db,
        open: true,
        min_margin: f64::INFINITY,
        argmin: 0.0,
        evaluated: 0,
    };
    for &a in grid.iter().filter(|&&a| a < 1.0) {
        let (m, se) = margin_at(est, edge_vn, snr_db, a, config.model, j);
        report.evaluated += 1;
        if m < report.min_margin {
            report.min_margin = m;
            report.argmin = a;
        }
        if m + config.stderr_factor * se <= 0.0 {
            report.open = false;
            if !full {
                break;
            }
        }
    }
    report
}

pub fn tunnel(
    edge_vn: &BTreeMap<u32, f64>,
    edge_cn: &BTreeMap<u32, f64>,
    table: &PartitionTable,
    snr_db: f64,
    config: &ThresholdConfig,
    j: &JTable,
) -> Result<TunnelReport> {
    let est = CndEstimator::new(edge_cn, table, config.cnd)?;
    Ok(tunnel_with(&est, edge_vn, snr_db, config, j, true))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// smallest SNR found with an open tunnel
    pub snr_db: f64,
    pub probes: Vec<TunnelReport>,
}

/// Bisection for the smallest SNR with an open tunnel. Every probe reuses the
/// same random draws, so the open/closed decision is monotone up to
/// interpolation noise.
pub fn threshold_search(
    edge_vn: &BTreeMap<u32, f64>,
    edge_cn: &BTreeMap<u32, f64>,
    table: &PartitionTable,
    config: &ThresholdConfig,
    j: &JTable,
) -> Result<ThresholdResult> {
    let est = CndEstimator::new(edge_cn, table, config.cnd)?;
    let mut probes = Vec::new();
    let mut probe = |snr: f64| {
        let r = tunnel_with(&est, edge_vn, snr, config, j, false);
        let open = r.open;
        probes.push(r);
        open
    };
    let (mut lo, mut hi) = (config.lo_db, config.hi_db);
    if !probe(hi) || probe(lo) {
        return Err(Error::NoBracket { lo, hi });
    }
    while hi - lo > config.resolution_db {
        let mid = 0.5 * (lo + hi);
        if probe(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdResult { snr_db: hi, probes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Preset;
    use crate::exit::jtable::JTableSpec;

    fn small() -> (JTable, ThresholdConfig) {
        let j = JTable::compute(JTableSpec {
            samples: 20_000,
            ..JTableSpec::default()
        });
        let cfg = ThresholdConfig {
            grid_size: 21,
            cnd: CndConfig {
                block_checks: 200,
                blocks: 2,
                ..CndConfig::default()
            },
            resolution_db: 0.1,
            ..ThresholdConfig::default()
        };
        (j, cfg)
    }

    #[test]
    fn threshold_separates_open_and_closed() {
        let (j, cfg) = small();
        let t = PartitionTable::hurwitz_1_2i();
        let p = Preset::Rate3_4;
        let r = threshold_search(&p.edge_vn(), &p.edge_cn(), &t, &cfg, &j).unwrap();
        assert!((r.snr_db - p.threshold_db()).abs() < 1.0, "{}", r.snr_db);
        let above = tunnel(&p.edge_vn(), &p.edge_cn(), &t, r.snr_db + 1.0, &cfg, &j).unwrap();
        let below = tunnel(&p.edge_vn(), &p.edge_cn(), &t, r.snr_db - 1.0, &cfg, &j).unwrap();
        assert!(above.open && above.min_margin > 0.0);
        assert!(!below.open && below.min_margin < 0.0);
        assert_eq!(below.evaluated, 20);
    }

    #[test]
    fn bracket_must_straddle_the_threshold() {
        let (j, mut cfg) = small();
        let t = PartitionTable::hurwitz_1_2i();
        let p = Preset::Rate1_2;
        cfg.lo_db = 8.0;
        cfg.hi_db = 10.0;
        assert!(matches!(
            threshold_search(&p.edge_vn(), &p.edge_cn(), &t, &cfg, &j),
            Err(Error::NoBracket { .. })
        ));
    }
}
