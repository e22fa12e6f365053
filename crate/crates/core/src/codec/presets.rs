//! Optimized ensembles for ℍ/(1+2i)ℍ at three design rates, with their
//! published decoding thresholds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "3/4")]
    Rate3_4,
    #[serde(rename = "2/3")]
    Rate2_3,
    #[serde(rename = "1/2")]
    Rate1_2,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Rate3_4, Preset::Rate2_3, Preset::Rate1_2];

    /// Edge-perspective variable-node fractions (sums are 1 to
    /// within 1e-6).
    pub fn edge_vn(self) -> BTreeMap<u32, f64> {
        let v: &[(u32, f64)] = match self {
            Preset::Rate3_4 => &[
                (2, 0.288274),
                (3, 0.265333),
                (7, 0.188119),
                (13, 0.123885),
                (15, 0.134389),
            ],
            Preset::Rate2_3 => &[
                (2, 0.240605),
                (3, 0.231215),
                (7, 0.081754),
                (8, 0.190942),
                (19, 0.175951),
                (20, 0.079534),
            ],
            Preset::Rate1_2 => &[
                (2, 0.163689),
                (3, 0.170788),
                (8, 0.120858),
                (9, 0.148837),
                (19, 0.038618),
                (20, 0.088323),
                (34, 0.268886),
            ],
        };
        v.iter().copied().collect()
    }

    pub fn edge_cn(self) -> BTreeMap<u32, f64> {
        let b1 = match self {
            Preset::Rate3_4 => 0.055556,
            Preset::Rate2_3 => 0.053861,
            Preset::Rate1_2 => 0.054328,
        };
        [(1, b1), (3, 1.0 - b1)].into_iter().collect()
    }

    /// `K/N` the ensemble is designed for.
    pub fn code_rate(self) -> f64 {
        match self {
            Preset::Rate3_4 => 0.75,
            Preset::Rate2_3 => 2.0 / 3.0,
            Preset::Rate1_2 => 0.5,
        }
    }

    /// Reference decoding threshold in dB.
    pub fn threshold_db(self) -> f64 {
        match self {
            Preset::Rate3_4 => 4.47,
            Preset::Rate2_3 => 3.31,
            Preset::Rate1_2 => 1.26,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Rate3_4 => "3/4",
            Preset::Rate2_3 => "2/3",
            Preset::Rate1_2 => "1/2",
        })
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().trim_start_matches("rate-") {
            "3/4" | "0.75" => Ok(Preset::Rate3_4),
            "2/3" => Ok(Preset::Rate2_3),
            "1/2" | "0.5" => Ok(Preset::Rate1_2),
            other => Err(Error::InvalidInput(format!(
                "unknown preset {other:?}; expected 3/4, 2/3 or 1/2"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_names() {
        for p in Preset::ALL {
            assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
        }
        assert!("5/6".parse::<Preset>().is_err());
    }

    #[test]
    fn fractions_sum_to_one() {
        for p in Preset::ALL {
            assert!((p.edge_vn().values().sum::<f64>() - 1.0).abs() < 2e-6);
            assert!((p.edge_cn().values().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
