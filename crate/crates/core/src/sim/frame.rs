//! One simulated frame: sample, encode, transmit, demap, decode. Frames are
//! serializable so a failing frame can be re-decoded exactly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{remove_coset_flat, transmit_with, Demapper};
use crate::codec::{encode_full, sample_graph_with, BpDecoder, CodeEnsemble, DecodeOutcome, Interleaver, IterationRecord, TannerGraphInstance};
use crate::error::{Error, Result};
use crate::lattice::{normalize_constellation, Constellation, PartitionTable, RingKind};
use crate::rng::{derive_seed, stream};

/// Everything needed to regenerate and re-decode one frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub xi: String,
    pub ring: RingKind,
    pub partition_digest: String,
    pub frame_seed: u64,
    pub snr_db: f64,
    pub noise: bool,
    pub max_iterations: usize,
    pub graph: TannerGraphInstance,
    pub u: Vec<u8>,
    /// decisions of the original run
    pub u_hat: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

impl FrameRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: Self = serde_json::from_str(s).map_err(|e| Error::Corrupt(e.to_string()))?;
        let table = PartitionTable::build(&rec.xi, rec.ring)?;
        if table.digest() != rec.partition_digest {
            return Err(Error::Corrupt("partition digest mismatch".into()));
        }
        rec.graph.validate(table.size())?;
        if rec.u.len() != rec.graph.k || rec.u_hat.len() != rec.graph.k {
            return Err(Error::Corrupt("symbol vectors do not match the graph".into()));
        }
        if rec.u.iter().any(|&v| v as usize >= table.size()) {
            return Err(Error::Corrupt("symbol outside the partition".into()));
        }
        Ok(rec)
    }

    pub fn symbol_errors(&self) -> usize {
        count_errors(&self.u, &self.u_hat)
    }
}

/// Re-decode of a stored frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayTranscript {
    pub outcome: DecodeOutcome,
    pub symbol_errors: usize,
    /// `u_hat` equals the stored decisions
    pub reproduces: bool,
}

/// Per-SNR state shared by all frames of a sweep point.
pub(crate) struct FrameContext<'a> {
    pub ensemble: &'a CodeEnsemble,
    pub table: &'a PartitionTable,
    pub constellation: &'a Constellation,
    pub demapper: Demapper,
    pub decoder: BpDecoder<'a, f64>,
    pub snr_db: f64,
    pub noise: bool,
    pub max_iterations: usize,
    pub interleaver: Interleaver,
}

impl<'a> FrameContext<'a> {
    pub fn new(
        ensemble: &'a CodeEnsemble,
        constellation: &'a Constellation,
        snr_db: f64,
        noise: bool,
        max_iterations: usize,
    ) -> Self {
        Self {
            ensemble,
            table: &ensemble.partition,
            constellation,
            demapper: Demapper::new(constellation, snr_db),
            decoder: BpDecoder::new(&ensemble.partition),
            snr_db,
            noise,
            max_iterations,
            interleaver: Interleaver::Uniform,
        }
    }

    /// Runs frame `frame_seed`; `fixed` replaces the per-frame graph.
    pub fn run(&self, frame_seed: u64, fixed: Option<&TannerGraphInstance>, trace: bool) -> Result<(FrameData, DecodeOutcome)> {
        let graph = match fixed {
            Some(g) => g.clone(),
            None => sample_graph_with(self.ensemble, derive_seed(frame_seed, 0), self.interleaver),
        };
        let mut rng = stream(frame_seed, 1);
        let q = self.table.size();
        let u: Vec<u8> = (0..graph.k).map(|_| rng.random_range(0..q) as u8).collect();
        let outcome = self.decode(&graph, &u, frame_seed, self.max_iterations, trace)?;
        Ok((FrameData { graph, u }, outcome))
    }

    fn decode(&self, graph: &TannerGraphInstance, u: &[u8], frame_seed: u64, max_iter: usize, trace: bool) -> Result<DecodeOutcome> {
        let cw = encode_full(u, graph, self.table)?;
        let mut rng = stream(frame_seed, 2);
        let amp = crate::channel::db_to_linear(self.snr_db).sqrt();
        let y = transmit_with(&cw.x, self.constellation, amp, self.noise, &mut rng);
        let mut app = self.demapper.app_flat(&y);
        remove_coset_flat(&mut app, &graph.r, self.table);
        self.decoder.decode(&app, graph, max_iter, trace)
    }
}

pub(crate) struct FrameData {
    pub graph: TannerGraphInstance,
    pub u: Vec<u8>,
}

pub(crate) fn count_errors(u: &[u8], u_hat: &[u8]) -> usize {
    u.iter().zip(u_hat).filter(|(a, b)| a != b).count()
}

pub(crate) fn make_record(
    ctx: &FrameContext<'_>,
    xi: &str,
    frame_seed: u64,
    data: FrameData,
    outcome: &DecodeOutcome,
) -> FrameRecord {
    FrameRecord {
        xi: xi.to_string(),
        ring: ctx.table.ring(),
        partition_digest: ctx.table.digest(),
        frame_seed,
        snr_db: ctx.snr_db,
        noise: ctx.noise,
        max_iterations: ctx.max_iterations,
        graph: data.graph,
        u: data.u,
        u_hat: outcome.u_hat.clone(),
        converged: outcome.converged,
        iterations: outcome.iterations,
    }
}

/// Simulates a single frame of `ensemble` and returns its record.
pub fn simulate_frame(
    ensemble: &CodeEnsemble,
    xi: &str,
    snr_db: f64,
    noise: bool,
    max_iterations: usize,
    frame_seed: u64,
) -> Result<FrameRecord> {
    let constellation = normalize_constellation(&ensemble.partition)?;
    let ctx = FrameContext::new(ensemble, &constellation, snr_db, noise, max_iterations);
    let (data, outcome) = ctx.run(frame_seed, None, false)?;
    Ok(make_record(&ctx, xi, frame_seed, data, &outcome))
}

/// Re-decodes a stored frame with `max_iterations` (the stored cap when
/// `None`) and a per-iteration trace.
pub fn replay_frame(record: &FrameRecord, max_iterations: Option<usize>) -> Result<ReplayTranscript> {
    let table = PartitionTable::build(&record.xi, record.ring)?;
    if table.digest() != record.partition_digest {
        return Err(Error::Corrupt("partition digest mismatch".into()));
    }
    let constellation = normalize_constellation(&table)?;
    let max_iter = max_iterations.unwrap_or(record.max_iterations);
    let demapper = Demapper::new(&constellation, record.snr_db);
    let decoder = BpDecoder::<f64>::new(&table);
    let cw = encode_full(&record.u, &record.graph, &table)?;
    let mut rng = stream(record.frame_seed, 2);
    let amp = crate::channel::db_to_linear(record.snr_db).sqrt();
    let y = transmit_with(&cw.x, &constellation, amp, record.noise, &mut rng);
    let mut app = demapper.app_flat(&y);
    remove_coset_flat(&mut app, &record.graph.r, &table);
    let outcome = decoder.decode(&app, &record.graph, max_iter, true)?;
    Ok(ReplayTranscript {
        symbol_errors: count_errors(&record.u, &outcome.u_hat),
        reproduces: outcome.u_hat == record.u_hat,
        outcome,
    })
}

/// Parity violations per traced iteration.
pub fn violation_profile(trace: &[IterationRecord]) -> Vec<usize> {
    trace.iter().map(|r| r.parity_violations).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{make_ensemble, Preset};

    fn ensemble() -> CodeEnsemble {
        let p = Preset::Rate1_2;
        make_ensemble(&p.edge_vn(), &p.edge_cn(), &PartitionTable::hurwitz_1_2i(), 500).unwrap()
    }

    #[test]
    fn replay_reproduces_decisions() {
        let e = ensemble();
        let rec = simulate_frame(&e, "1+2i", 0.5, true, 20, 77).unwrap();
        assert!(rec.symbol_errors() > 0);
        let back = FrameRecord::from_json(&rec.to_json().unwrap()).unwrap();
        assert_eq!(back, rec);
        let t = replay_frame(&back, None).unwrap();
        assert!(t.reproduces);
        assert_eq!(t.outcome.trace.len(), rec.iterations);
        let longer = replay_frame(&back, Some(70)).unwrap();
        assert_eq!(&longer.outcome.trace[..t.outcome.trace.len()], &t.outcome.trace[..]);
    }

    #[test]
    fn corrupt_records_are_rejected() {
        let e = ensemble();
        let rec = simulate_frame(&e, "1+2i", 3.0, true, 20, 5).unwrap();
        let json = rec.to_json().unwrap();
        assert!(matches!(FrameRecord::from_json(&json[..json.len() / 2]), Err(Error::Corrupt(_))));
        let mut bad = rec.clone();
        bad.partition_digest = "00".into();
        assert!(FrameRecord::from_json(&bad.to_json().unwrap()).is_err());
        let mut bad = rec;
        bad.u.pop();
        assert!(FrameRecord::from_json(&bad.to_json().unwrap()).is_err());
    }
}
