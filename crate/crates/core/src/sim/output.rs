//! Result files: CSV rows, JSON with run metadata, two-column plot data.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::Command;

use serde::{Deserialize, Serialize};

use super::capacity::CapacityTable;
use super::experiment::{ExperimentSpec, ResultRow};
use crate::error::Result;

/// Provenance written next to every result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub crate_version: String,
    /// `None` outside a git checkout
    pub git_revision: Option<String>,
    pub master_seed: u64,
    pub partition_digest: String,
    /// digest of the J table when EXIT functions were used
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_table_digest: Option<String>,
}

impl RunMetadata {
    pub fn new(master_seed: u64, partition_digest: String) -> Self {
        Self {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            git_revision: git_revision(),
            master_seed,
            partition_digest,
            j_table_digest: None,
        }
    }
}

pub fn git_revision() -> Option<String> {
    let out = Command::new("git").args(["rev-parse", "HEAD"]).output().ok()?;
    out.status
        .success()
        .then(|| String::from_utf8_lossy(&out.stdout).trim().to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub metadata: RunMetadata,
    pub spec: ExperimentSpec,
    pub k: usize,
    pub rows: Vec<ResultRow>,
}

pub const CSV_HEADER: &str = "snr_db,frames,symbol_errors,frame_errors,ser,fer,avg_iterations,capped";

/// One line per SNR point. Wall time is left out so identical runs give
/// identical files.
pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{:e},{:e},{},{}",
            r.snr_db, r.frames, r.symbol_errors, r.frame_errors, r.ser, r.fer, r.avg_iterations, r.capped
        );
    }
    s
}

pub fn capacity_to_csv(table: &CapacityTable) -> String {
    let mut s = String::from("snr_db,unrestricted,hurwitz,hurwitz_stderr,gaussian,gaussian_stderr,dominance,dominance_z\n");
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.snr_db, r.unrestricted, r.hurwitz, r.hurwitz_stderr, r.gaussian, r.gaussian_stderr, r.dominance, r.dominance_z
        );
    }
    s
}

/// Whitespace-separated `x y` lines.
pub fn plot_data(points: &[(f64, f64)]) -> String {
    let mut s = String::new();
    for (x, y) in points {
        let _ = writeln!(s, "{x} {y}");
    }
    s
}

/// Writes `<stem>.csv` and `<stem>.json` under `dir`.
pub fn write_sweep(dir: &Path, stem: &str, report: &SweepReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{stem}.csv")), rows_to_csv(&report.rows))?;
    fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(report)?)?;
    let ser: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.snr_db, r.ser)).collect();
    fs::write(dir.join(format!("{stem}.dat")), plot_data(&ser))?;
    Ok(())
}

/// Writes the capacity CSV and one `.dat` file per curve.
pub fn write_capacity(dir: &Path, stem: &str, table: &CapacityTable) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{stem}.csv")), capacity_to_csv(table))?;
    for (name, pts) in table.curves() {
        fs::write(dir.join(format!("{stem}_{name}.dat")), plot_data(&pts))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_one_line_per_row() {
        let row = ResultRow {
            snr_db: 1.5,
            frames: 10,
            symbol_errors: 3,
            frame_errors: 1,
            ser: 3e-4,
            fer: 0.1,
            avg_iterations: 12.5,
            capped: true,
            wall_time: 9.0,
        };
        let csv = rows_to_csv(&[row.clone(), row]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "1.5,10,3,1,3e-4,1e-1,12.5,true");
    }

    #[test]
    fn plot_lines() {
        assert_eq!(plot_data(&[(0.0, 1.0), (0.5, 2.0)]), "0 1\n0.5 2\n");
    }
}
