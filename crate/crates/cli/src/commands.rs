//! Subcommand implementations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::Path;

use ira_lattice::codec::{make_ensemble, parse_degree_map, sample_graph_with, Interleaver, Preset};
use ira_lattice::exit::{
    optimize_degrees, shannon_limit, threshold_search, tunnel, uniform_grid, vnd_curve, CndConfig, CndEstimator,
    CndMode, ExitModel, JTable, OptimizerConfig, ThresholdConfig,
};
use ira_lattice::sim::{
    replay_frame, run_capacity_sweep, run_ser_sweep_with, violation_profile, write_capacity, write_sweep,
    EnsembleSpec, ExperimentSpec, FrameRecord, GraphMode, RunMetadata, StopRule, SweepReport,
};
use ira_lattice::{Error, PartitionTable, Result, RingKind};
use serde_json::{json, Value};

use crate::args::*;
use crate::manifest;

/// `println!` that ignores a closed stdout.
macro_rules! emit {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    fs::create_dir_all(&cli.out)?;
    let digests = match &cli.command {
        Command::Partition(a) => partition(cli, a)?,
        Command::Ensemble(a) => ensemble(cli, a)?,
        Command::Exit(a) => exit(cli, a)?,
        Command::Optimize(a) => optimize(cli, a)?,
        Command::Threshold(a) => threshold(cli, a)?,
        Command::Simulate(a) => simulate(cli, a)?,
        Command::Capacity(a) => capacity(cli, a)?,
        Command::Replay(a) => replay(cli, a)?,
    };
    manifest::write(cli, digests)
}

/// Prints `line` and appends it to `<out>/run.log`.
fn report(cli: &Cli, line: &str) -> Result<()> {
    emit!("{line}");
    let mut f = OpenOptions::new().create(true).append(true).open(cli.out.join("run.log"))?;
    writeln!(f, "{line}")?;
    Ok(())
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> Result<()> {
    fs::write(dir.join(name), serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn ring_kind(r: Ring) -> RingKind {
    match r {
        Ring::Hurwitz => RingKind::Hurwitz,
        Ring::Gaussian => RingKind::Gaussian,
    }
}

fn build_partition(p: &PartitionSpec) -> Result<PartitionTable> {
    PartitionTable::build(&p.xi, ring_kind(p.ring))
}

type Distribution = (BTreeMap<u32, f64>, BTreeMap<u32, f64>, Option<Preset>);

fn distribution(d: &DistributionSpec) -> Result<Distribution> {
    match (&d.preset, &d.vn, &d.cn) {
        (Some(p), _, _) => {
            let p: Preset = p.parse()?;
            Ok((p.edge_vn(), p.edge_cn(), Some(p)))
        }
        (None, Some(vn), Some(cn)) => Ok((parse_degree_map(vn)?, parse_degree_map(cn)?, None)),
        _ => Err(Error::InvalidInput("give --preset or both --vn and --cn".into())),
    }
}

fn cnd_config(cli: &Cli, a: &CndArgs) -> CndConfig {
    CndConfig {
        block_checks: a.block_checks,
        blocks: a.blocks,
        seed: cli.seed,
        mode: match a.cnd_mode {
            CndScope::Chain => CndMode::Chain,
            CndScope::Neighborhood => CndMode::Neighborhood,
        },
        ..CndConfig::default()
    }
}

fn exit_model(m: Model) -> ExitModel {
    match m {
        Model::Mixture => ExitModel::Mixture,
        Model::Gaussian => ExitModel::Gaussian,
    }
}

fn threshold_config(cli: &Cli, a: &CndArgs) -> ThresholdConfig {
    ThresholdConfig {
        grid_size: a.grid,
        cnd: cnd_config(cli, a),
        model: exit_model(a.model),
        ..ThresholdConfig::default()
    }
}

fn partition(cli: &Cli, a: &PartitionArgs) -> Result<Value> {
    let t = build_partition(&a.partition)?;
    let doc = t.to_json()?;
    fs::write(cli.out.join("partition.json"), &doc)?;
    emit!("{doc}");
    Ok(json!({ "partition": t.digest() }))
}

fn interleaver(a: &InterleaverSpec) -> Interleaver {
    match a.spread {
        Some(spread) => Interleaver::Conditioned { spread },
        None => Interleaver::Uniform,
    }
}

fn ensemble(cli: &Cli, a: &EnsembleArgs) -> Result<Value> {
    let (vn, cn, _) = distribution(&a.distribution)?;
    let t = build_partition(&a.partition)?;
    let e = make_ensemble(&vn, &cn, &t, a.n)?;
    let summary = json!({
        "k": e.k,
        "n": e.n,
        "l": e.l,
        "code_rate": e.code_rate(),
        "design_rate_bits": e.design_rate,
        "edge_vn": e.degree.edge_vn,
        "edge_cn": e.degree.edge_cn,
        "realized_edge_vn": e.realized_edge_vn(),
        "realized_edge_cn": e.realized_edge_cn(),
    });
    write_json(&cli.out, "ensemble.json", &e)?;
    if a.graph {
        write_json(&cli.out, "graph.json", &sample_graph_with(&e, cli.seed, interleaver(&a.interleaver)))?;
    }
    emit!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(json!({ "partition": t.digest() }))
}

fn exit(cli: &Cli, a: &ExitArgs) -> Result<Value> {
    let (vn, cn, _) = distribution(&a.distribution)?;
    let t = PartitionTable::hurwitz_1_2i();
    let j = JTable::standard();
    let grid = uniform_grid(a.cnd.grid);
    let est = CndEstimator::new(&cn, &t, cnd_config(cli, &a.cnd))?;
    let vnd = vnd_curve(&vn, &grid, j);
    let cnd = est.curve(a.snr, &grid, j);
    fs::write(cli.out.join("exit_vnd.dat"), vnd.plot_data())?;
    fs::write(cli.out.join("exit_cnd.dat"), cnd.plot_data())?;
    let mut mixture = String::new();
    let mut mixture_points = Vec::new();
    if matches!(a.cnd.model, Model::Mixture) {
        for &y in &grid {
            let (c, se) = est.point_mixture(a.snr, y, &vn, j);
            let _ = writeln!(mixture, "{y:.6} {c:.6}");
            mixture_points.push((y, c, se));
        }
        fs::write(cli.out.join("exit_mixture.dat"), &mixture)?;
    }
    let cfg = threshold_config(cli, &a.cnd);
    let tun = tunnel(&vn, &cn, &t, a.snr, &cfg, j)?;
    write_json(
        &cli.out,
        "exit.json",
        &json!({ "vnd": vnd, "cnd": cnd, "mixture": mixture_points, "tunnel": tun }),
    )?;
    report(
        cli,
        &format!(
            "exit at {} dB: tunnel {} (min margin {:.5} at {:.2})",
            a.snr,
            if tun.open { "open" } else { "closed" },
            tun.min_margin,
            tun.argmin
        ),
    )?;
    Ok(json!({ "partition": t.digest(), "j_table": j.digest() }))
}

fn optimize(cli: &Cli, a: &OptimizeArgs) -> Result<Value> {
    let (cn, preset_rate) = match (&a.preset, &a.cn) {
        (Some(p), _) => {
            let p: Preset = p.parse()?;
            (p.edge_cn(), Some(p.code_rate()))
        }
        (None, Some(cn)) => (parse_degree_map(cn)?, None),
        (None, None) => return Err(Error::InvalidInput("give --preset or --cn".into())),
    };
    let rate = a
        .rate
        .or(preset_rate)
        .ok_or_else(|| Error::InvalidInput("give --rate".into()))?;
    let t = build_partition(&a.partition)?;
    let j = JTable::standard();
    let cfg = OptimizerConfig {
        gap: a.gap,
        outer_iterations: a.rounds,
        grid_size: a.cnd.grid,
        max_degree: a.max_degree,
        cn_step: a.cn_step,
        cnd: cnd_config(cli, &a.cnd),
        model: exit_model(a.cnd.model),
        ..OptimizerConfig::default()
    };
    let d = optimize_degrees(&cn, &t, a.snr, rate, &cfg, j)?;
    write_json(&cli.out, "optimized.json", &d)?;
    emit!("{}", serde_json::to_string_pretty(&d)?);
    report(
        cli,
        &format!("optimized at {} dB: rate {:.4}, min margin {:.5}", a.snr, d.rate, d.min_margin),
    )?;
    Ok(json!({ "partition": t.digest(), "j_table": j.digest() }))
}

fn threshold(cli: &Cli, a: &ThresholdArgs) -> Result<Value> {
    let (vn, cn, preset) = distribution(&a.distribution)?;
    let t = build_partition(&a.partition)?;
    let j = JTable::standard();
    let cfg = ThresholdConfig {
        lo_db: a.lo,
        hi_db: a.hi,
        resolution_db: a.resolution,
        ..threshold_config(cli, &a.cnd)
    };
    let r = threshold_search(&vn, &cn, &t, &cfg, j)?;
    write_json(&cli.out, "threshold.json", &r)?;
    let mut line = format!("threshold: {:.2} dB", r.snr_db);
    if let Some(p) = preset {
        let _ = write!(line, " (rate {p}, reference {:.2} dB)", p.threshold_db());
    }
    report(cli, &line)?;
    Ok(json!({ "partition": t.digest(), "j_table": j.digest() }))
}

fn simulate(cli: &Cli, a: &SimulateArgs) -> Result<Value> {
    let spec = match &a.spec {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str::<ExperimentSpec>(&text).map_err(|e| Error::Corrupt(e.to_string()))?
        }
        None => {
            let (vn, cn, _) = distribution(&a.distribution)?;
            let ensemble = EnsembleSpec {
                edge_vn: vn,
                edge_cn: cn,
                n: a.n,
                ring: ring_kind(a.partition.ring),
                xi: a.partition.xi.clone(),
                interleaver: interleaver(&a.interleaver),
            };
            let mut s = ExperimentSpec::new(ensemble, a.snr_start, a.snr_stop.unwrap_or(a.snr_start), a.snr_step, cli.seed);
            s.max_iterations = a.max_iter;
            s.stop = StopRule {
                min_symbol_errors: a.min_errors,
                max_frames: a.max_frames,
            };
            s.noise = !a.no_noise;
            s.graph_mode = match a.graph_mode {
                GraphChoice::Fresh => GraphMode::Fresh,
                GraphChoice::Fixed => GraphMode::Fixed,
            };
            s.batch = a.batch;
            s.keep_failures = a.keep_failures;
            s
        }
    };
    let digest = spec.ensemble.partition()?.digest();
    emit!("snr_db frames symbol_errors ser fer avg_iterations");
    let out = run_ser_sweep_with(&spec, |r| {
        emit!(
            "{:.3} {} {} {:.3e} {:.3e} {:.1}{}",
            r.snr_db,
            r.frames,
            r.symbol_errors,
            r.ser,
            r.fer,
            r.avg_iterations,
            if r.capped { " (frame cap)" } else { "" }
        );
    })?;
    let report_doc = SweepReport {
        metadata: RunMetadata::new(spec.master_seed, digest.clone()),
        spec: spec.clone(),
        k: out.k,
        rows: out.rows,
    };
    write_sweep(&cli.out, "ser", &report_doc)?;
    write_json(&cli.out, "spec.json", &spec)?;
    for (i, f) in out.failures.iter().enumerate() {
        fs::write(cli.out.join(format!("frame_{i:04}.json")), f.to_json()?)?;
    }
    Ok(json!({ "partition": digest }))
}

fn capacity(cli: &Cli, a: &CapacityArgs) -> Result<Value> {
    if !(a.snr_step > 0.0) || a.snr_stop < a.snr_start {
        return Err(Error::InvalidInput("empty SNR grid".into()));
    }
    let count = ((a.snr_stop - a.snr_start) / a.snr_step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| a.snr_start + i as f64 * a.snr_step).collect();
    let h = PartitionTable::hurwitz_1_2i();
    let g = PartitionTable::gaussian_1_2i();
    let table = run_capacity_sweep(&h, &g, &grid, a.samples, cli.seed)?;
    write_capacity(&cli.out, "capacity", &table)?;
    for &rate in &a.rates {
        report(cli, &format!("shannon limit for {rate} bits: {:.2} dB", shannon_limit(rate)?))?;
    }
    report(
        cli,
        &format!("hurwitz dominates gaussian within 3 stderr: {}", table.dominates(3.0)),
    )?;
    Ok(json!({ "hurwitz": h.digest(), "gaussian": g.digest() }))
}

fn replay(cli: &Cli, a: &ReplayArgs) -> Result<Value> {
    let text = fs::read_to_string(&a.frame)?;
    let rec = FrameRecord::from_json(&text)?;
    let t = replay_frame(&rec, a.max_iter)?;
    write_json(&cli.out, "replay.json", &t)?;
    report(
        cli,
        &format!(
            "replay: {} iterations, converged {}, symbol errors {}, reproduces stored decisions {}",
            t.outcome.iterations, t.outcome.converged, t.symbol_errors, t.reproduces
        ),
    )?;
    report(cli, &format!("parity violations per iteration: {:?}", violation_profile(&t.outcome.trace)))?;
    Ok(json!({ "partition": rec.partition_digest }))
}
