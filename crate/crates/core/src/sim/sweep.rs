//! SER/FER sweeps over SNR. Frame `f` uses seed `derive_seed(master, f)` at
//! every SNR point, so points share their random numbers and the result is
//! independent of the thread count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::{ExperimentSpec, GraphMode, ResultRow};
use super::frame::{count_errors, make_record, FrameContext, FrameRecord};
use crate::codec::sample_graph_with;
use crate::error::Result;
use crate::lattice::normalize_constellation;
use crate::rng::derive_seed;

/// Stream index of the fixed graph in [`GraphMode::Fixed`].
const FIXED_GRAPH_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub rows: Vec<ResultRow>,
    /// failing frames kept for replay, in SNR then frame order
    pub failures: Vec<FrameRecord>,
    /// realized `K`
    pub k: usize,
}

pub fn run_ser_sweep(spec: &ExperimentSpec) -> Result<SweepOutput> {
    run_ser_sweep_with(spec, |_| {})
}

/// [`run_ser_sweep`] calling `on_row` as each SNR point completes.
pub fn run_ser_sweep_with(spec: &ExperimentSpec, mut on_row: impl FnMut(&ResultRow)) -> Result<SweepOutput> {
    spec.validate()?;
    let ensemble = spec.ensemble.realize()?;
    let constellation = normalize_constellation(&ensemble.partition)?;
    let fixed = match spec.graph_mode {
        GraphMode::Fixed => Some(sample_graph_with(
            &ensemble,
            derive_seed(spec.master_seed, FIXED_GRAPH_STREAM),
            spec.ensemble.interleaver,
        )),
        GraphMode::Fresh => None,
    };
    let k = ensemble.k;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for snr_db in spec.snr_points() {
        let start = Instant::now();
        let mut ctx = FrameContext::new(&ensemble, &constellation, snr_db, spec.noise, spec.max_iterations);
        ctx.interleaver = spec.ensemble.interleaver;
        let (mut frames, mut symbol_errors, mut frame_errors, mut iterations) = (0u64, 0u64, 0u64, 0u64);
        let mut kept = 0usize;
        while symbol_errors < spec.stop.min_symbol_errors && frames < spec.stop.max_frames {
            let batch = (spec.batch as u64).min(spec.stop.max_frames - frames);
            let results: Vec<Result<(usize, usize, Option<FrameRecord>)>> = (frames..frames + batch)
                .into_par_iter()
                .map(|f| {
                    let seed = derive_seed(spec.master_seed, f);
                    let (data, outcome) = ctx.run(seed, fixed.as_ref(), false)?;
                    let errors = count_errors(&data.u, &outcome.u_hat);
                    let record = (errors > 0 && spec.keep_failures > 0)
                        .then(|| make_record(&ctx, &spec.ensemble.xi, seed, data, &outcome));
                    Ok((errors, outcome.iterations, record))
                })
                .collect();
            for r in results {
                let (errors, iters, record) = r?;
                symbol_errors += errors as u64;
                frame_errors += u64::from(errors > 0);
                iterations += iters as u64;
                if let Some(rec) = record {
                    if kept < spec.keep_failures {
                        failures.push(rec);
                        kept += 1;
                    }
                }
            }
            frames += batch;
        }
        let row = ResultRow {
            snr_db,
            frames,
            symbol_errors,
            frame_errors,
            ser: symbol_errors as f64 / (frames * k as u64) as f64,
            fer: frame_errors as f64 / frames as f64,
            avg_iterations: iterations as f64 / frames as f64,
            capped: symbol_errors < spec.stop.min_symbol_errors,
            wall_time: start.elapsed().as_secs_f64(),
        };
        on_row(&row);
        rows.push(row);
    }
    Ok(SweepOutput { rows, failures, k })
}
