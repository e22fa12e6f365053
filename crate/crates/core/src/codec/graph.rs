//! Sampled Tanner graph: interleaver, combiner spans and the random
//! sequences `g`, `g′`, `g″`, `r`.
//!
//! Check `n` joins interleaver slots `a_n .. a_n + j_n`, the previous parity
//! `c_{n−1}` (absent for `n = 0`, where `c_{−1}` is the fixed zero) and the
//! inverse of its own parity `c_n`. Every check satisfies
//! `g_{a_n} ⊕ … ⊕ g_{a_n+j_n−1} ⊕ g′_n ⊕ g″_n = ψ₀`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ensemble::CodeEnsemble;
use crate::error::{Error, Result};
use crate::lattice::PartitionTable;
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TannerGraphInstance {
    pub seed: u64,
    pub k: usize,
    pub n: usize,
    pub l: usize,
    /// degree of every information node
    pub vn_degrees: Vec<u32>,
    /// `interleaver[slot]` is the repeater output feeding interleaved slot
    /// `slot`; repeater outputs are ordered by information node
    pub interleaver: Vec<u32>,
    /// `(a_n, j_n)` per check node
    pub spans: Vec<(u32, u32)>,
    pub g: Vec<u8>,
    pub g_prime: Vec<u8>,
    pub g_dprime: Vec<u8>,
    pub r: Vec<u8>,
}

impl TannerGraphInstance {
    /// Information node behind each interleaved slot.
    pub fn slot_vn(&self) -> Vec<u32> {
        let mut owner = Vec::with_capacity(self.l);
        for (m, &d) in self.vn_degrees.iter().enumerate() {
            owner.extend(std::iter::repeat_n(m as u32, d as usize));
        }
        self.interleaver.iter().map(|&e| owner[e as usize]).collect()
    }

    /// Interleaved slots of each information node.
    pub fn vn_slots(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self.vn_degrees.iter().map(|&d| Vec::with_capacity(d as usize)).collect();
        for (slot, &m) in self.slot_vn().iter().enumerate() {
            out[m as usize].push(slot as u32);
        }
        out
    }

    /// Check node owning each interleaved slot.
    pub fn slot_check(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.l];
        for (n, &(a, j)) in self.spans.iter().enumerate() {
            for s in a..a + j {
                out[s as usize] = n as u32;
            }
        }
        out
    }

    /// `⊕ g ⊕ g′ ⊕ g″` per check; all zero for a linear code.
    pub fn constraint_residuals(&self, table: &PartitionTable) -> Vec<usize> {
        self.spans
            .iter()
            .enumerate()
            .map(|(n, &(a, j))| {
                let mut acc = table.add_idx(self.g_prime[n] as usize, self.g_dprime[n] as usize);
                for s in a..a + j {
                    acc = table.add_idx(acc, self.g[s as usize] as usize);
                }
                acc
            })
            .collect()
    }

    /// Redraws `g″` ignoring the linearity constraint.
    pub fn resample_g_dprime_unconstrained(&mut self, q: usize, seed: u64) {
        let mut rng = rng::stream(seed, u64::MAX);
        for v in self.g_dprime.iter_mut() {
            *v = rng.random_range(0..q) as u8;
        }
    }

    /// Structural consistency of a deserialized instance.
    pub fn validate(&self, q: usize) -> Result<()> {
        let corrupt = |m: &str| Err(Error::Corrupt(format!("graph instance: {m}")));
        if self.vn_degrees.len() != self.k
            || self.interleaver.len() != self.l
            || self.g.len() != self.l
            || self.spans.len() != self.n
            || self.g_prime.len() != self.n
            || self.g_dprime.len() != self.n
            || self.r.len() != self.n
        {
            return corrupt("length mismatch");
        }
        if self.vn_degrees.iter().map(|&d| d as usize).sum::<usize>() != self.l {
            return corrupt("degrees do not sum to L");
        }
        let mut seen = vec![false; self.l];
        for &e in &self.interleaver {
            if e as usize >= self.l || std::mem::replace(&mut seen[e as usize], true) {
                return corrupt("interleaver is not a permutation");
            }
        }
        let mut next = 0u32;
        for &(a, j) in &self.spans {
            if a != next || j == 0 {
                return corrupt("spans do not tile the interleaver");
            }
            next = a + j;
        }
        if next as usize != self.l {
            return corrupt("spans do not cover the interleaver");
        }
        let seqs = [&self.g, &self.g_prime, &self.g_dprime, &self.r];
        if seqs.iter().any(|s| s.iter().any(|&v| v as usize >= q)) {
            return corrupt("sequence entry outside the partition");
        }
        Ok(())
    }
}

/// Interleaver construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Interleaver {
    /// uniform permutation
    #[default]
    Uniform,
    /// uniform permutation, then no cycle through at most
    /// [`CONDITIONED_HOPS`] degree-2 information nodes spans `spread` or
    /// fewer accumulator steps
    Conditioned { spread: u32 },
}

/// Degree-2 nodes a conditioned cycle may pass through.
pub const CONDITIONED_HOPS: usize = 3;

/// [`sample_graph_with`] and a uniform interleaver.
pub fn sample_graph(ensemble: &CodeEnsemble, seed: u64) -> TannerGraphInstance {
    sample_graph_with(ensemble, seed, Interleaver::Uniform)
}

/// Draws an instance of the ensemble; fully determined by `seed` and
/// `interleaver`.
///
/// Check degrees are placed along the accumulator chain in random order. No
/// information node meets the same check twice. The last `g` of each span is
/// solved from the linearity constraint.
pub fn sample_graph_with(ensemble: &CodeEnsemble, seed: u64, interleaver_kind: Interleaver) -> TannerGraphInstance {
    let table = &ensemble.partition;
    let q = table.size();
    let mut rng = rng::stream(seed, 0);
    let mut cn = ensemble.cn_degrees.clone();
    cn.shuffle(&mut rng);
    let mut interleaver: Vec<u32> = (0..ensemble.l as u32).collect();
    interleaver.shuffle(&mut rng);
    let mut owner = Vec::with_capacity(ensemble.l);
    for (m, &d) in ensemble.vn_degrees.iter().enumerate() {
        owner.extend(std::iter::repeat_n(m as u32, d as usize));
    }
    let mut starts = Vec::with_capacity(ensemble.n + 1);
    starts.push(0usize);
    for &j in &cn {
        starts.push(starts.last().unwrap() + j as usize);
    }
    separate_repeated_edges(&mut interleaver, &owner, &starts, &mut rng);
    if let Interleaver::Conditioned { spread } = interleaver_kind {
        break_short_cycles(&mut interleaver, &owner, &ensemble.vn_degrees, &starts, spread as usize, &mut rng);
    }

    let mut spans = Vec::with_capacity(ensemble.n);
    let mut g = vec![0u8; ensemble.l];
    let mut g_prime = vec![0u8; ensemble.n];
    let mut g_dprime = vec![0u8; ensemble.n];
    let mut a = 0u32;
    for (n, &j) in cn.iter().enumerate() {
        spans.push((a, j));
        g_prime[n] = rng.random_range(0..q) as u8;
        g_dprime[n] = rng.random_range(0..q) as u8;
        let mut acc = table.add_idx(g_prime[n] as usize, g_dprime[n] as usize);
        for s in a..a + j - 1 {
            let v = rng.random_range(0..q);
            g[s as usize] = v as u8;
            acc = table.add_idx(acc, v);
        }
        g[(a + j - 1) as usize] = table.neg_idx(acc) as u8;
        a += j;
    }
    let r = (0..ensemble.n).map(|_| rng.random_range(0..q) as u8).collect();
    TannerGraphInstance {
        seed,
        k: ensemble.k,
        n: ensemble.n,
        l: ensemble.l,
        vn_degrees: ensemble.vn_degrees.clone(),
        interleaver,
        spans,
        g,
        g_prime,
        g_dprime,
        r,
    }
}

/// Swaps interleaver entries until no check holds two edges of one node.
/// Gives up on a slot after a bounded number of draws.
fn separate_repeated_edges(interleaver: &mut [u32], owner: &[u32], starts: &[usize], rng: &mut impl Rng) {
    const DRAWS: usize = 1000;
    let l = interleaver.len();
    let n = starts.len() - 1;
    let mut check_of = vec![0usize; l];
    for c in 0..n {
        check_of[starts[c]..starts[c + 1]].fill(c);
    }
    let holds = |il: &[u32], c: usize, vn: u32, skip: usize| {
        (starts[c]..starts[c + 1]).any(|s| s != skip && owner[il[s] as usize] == vn)
    };
    for c in 0..n {
        for s in starts[c]..starts[c + 1] {
            let vn = owner[interleaver[s] as usize];
            if !holds(interleaver, c, vn, s) {
                continue;
            }
            for _ in 0..DRAWS {
                let t = rng.random_range(0..l);
                let d = check_of[t];
                let other = owner[interleaver[t] as usize];
                if d != c && !holds(interleaver, d, vn, t) && !holds(interleaver, c, other, s) {
                    interleaver.swap(s, t);
                    break;
                }
            }
        }
    }
}

/// Lengths of the shortest cycles through degree-2 information nodes and
/// the accumulator chain.
struct Degree2Cycles<'a> {
    owner: &'a [u32],
    check_of: Vec<usize>,
    /// slots of every degree-2 node; empty for other nodes
    ends: Vec<[usize; 2]>,
    /// degree-2 nodes touching each check
    at: Vec<Vec<u32>>,
}

impl<'a> Degree2Cycles<'a> {
    fn new(interleaver: &[u32], owner: &'a [u32], degrees: &[u32], starts: &[usize]) -> Self {
        let n = starts.len() - 1;
        let mut check_of = vec![0usize; interleaver.len()];
        for c in 0..n {
            check_of[starts[c]..starts[c + 1]].fill(c);
        }
        let mut ends = vec![[usize::MAX; 2]; degrees.len()];
        let mut at = vec![Vec::new(); n];
        for (s, &e) in interleaver.iter().enumerate() {
            let m = owner[e as usize] as usize;
            if degrees[m] == 2 {
                let k = usize::from(ends[m][0] != usize::MAX);
                ends[m][k] = s;
                at[check_of[s]].push(m as u32);
            }
        }
        Self { owner, check_of, ends, at }
    }

    fn other_end(&self, m: usize, check: usize) -> usize {
        let [a, b] = self.ends[m];
        if self.check_of[a] == check {
            self.check_of[b]
        } else {
            self.check_of[a]
        }
    }

    /// Whether node `m` lies on a cycle spanning at most `spread` chain steps.
    fn on_short_cycle(&self, m: usize, spread: usize) -> bool {
        let [a, b] = self.ends[m];
        let mut used = vec![m as u32];
        self.walk(self.check_of[b], self.check_of[a], spread, &mut used)
    }

    fn walk(&self, from: usize, to: usize, budget: usize, used: &mut Vec<u32>) -> bool {
        if from.abs_diff(to) <= budget {
            return true;
        }
        if used.len() > CONDITIONED_HOPS {
            return false;
        }
        let lo = from.saturating_sub(budget);
        let hi = (from + budget).min(self.at.len() - 1);
        for c in lo..=hi {
            for &v in &self.at[c] {
                if used.contains(&v) {
                    continue;
                }
                used.push(v);
                let next = self.other_end(v as usize, c);
                let found = self.walk(next, to, budget - from.abs_diff(c), used);
                used.pop();
                if found {
                    return true;
                }
            }
        }
        false
    }

    /// Moves slot `s` of degree-2 node `m` to slot `t`, whose owner is not a
    /// degree-2 node.
    fn relocate(&mut self, interleaver: &mut [u32], m: usize, s: usize, t: usize) {
        let old = self.check_of[s];
        let pos = self.at[old].iter().position(|&v| v as usize == m).unwrap();
        self.at[old].swap_remove(pos);
        self.at[self.check_of[t]].push(m as u32);
        let k = usize::from(self.ends[m][1] == s);
        self.ends[m][k] = t;
        interleaver.swap(s, t);
    }
}

/// Swaps slots of degree-2 nodes on short cycles with slots of higher-degree
/// nodes, keeping checks free of repeated nodes. Passes are bounded.
fn break_short_cycles(
    interleaver: &mut [u32],
    owner: &[u32],
    degrees: &[u32],
    starts: &[usize],
    spread: usize,
    rng: &mut impl Rng,
) {
    const PASSES: usize = 50;
    const DRAWS: usize = 1000;
    let l = interleaver.len();
    let mut cycles = Degree2Cycles::new(interleaver, owner, degrees, starts);
    let holds = |il: &[u32], c: usize, vn: u32, skip: usize| {
        (starts[c]..starts[c + 1]).any(|s| s != skip && owner[il[s] as usize] == vn)
    };
    for _ in 0..PASSES {
        let mut clean = true;
        for m in 0..degrees.len() {
            if degrees[m] != 2 || !cycles.on_short_cycle(m, spread) {
                continue;
            }
            clean = false;
            let s = cycles.ends[m][rng.random_range(0..2)];
            let c = cycles.check_of[s];
            for _ in 0..DRAWS {
                let t = rng.random_range(0..l);
                let d = cycles.check_of[t];
                let other = cycles.owner[interleaver[t] as usize];
                if degrees[other as usize] != 2
                    && d != c
                    && !holds(interleaver, d, m as u32, t)
                    && !holds(interleaver, c, other, s)
                {
                    cycles.relocate(interleaver, m, s, t);
                    break;
                }
            }
        }
        if clean {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::ensemble::make_ensemble;
    use crate::codec::presets::Preset;

    fn ensemble(n: usize) -> CodeEnsemble {
        let p = Preset::Rate1_2;
        make_ensemble(&p.edge_vn(), &p.edge_cn(), &PartitionTable::hurwitz_1_2i(), n).unwrap()
    }

    #[test]
    fn deterministic_and_valid() {
        let e = ensemble(1000);
        let a = sample_graph(&e, 5);
        assert_eq!(a, sample_graph(&e, 5));
        assert_ne!(a, sample_graph(&e, 6));
        a.validate(25).unwrap();
        assert!(a.constraint_residuals(&e.partition).iter().all(|&v| v == 0));
    }

    #[test]
    fn adjacency_balances() {
        let e = ensemble(500);
        let gr = sample_graph(&e, 1);
        let slots = gr.vn_slots();
        for (m, s) in slots.iter().enumerate() {
            assert_eq!(s.len(), gr.vn_degrees[m] as usize);
        }
        let per_check: usize = gr.spans.iter().map(|s| s.1 as usize).sum();
        assert_eq!(per_check, gr.l);
    }

    fn short_cycle_nodes(gr: &TannerGraphInstance, spread: usize) -> usize {
        let mut owner = Vec::new();
        for (m, &d) in gr.vn_degrees.iter().enumerate() {
            owner.extend(std::iter::repeat_n(m as u32, d as usize));
        }
        let mut starts = vec![0usize];
        starts.extend(gr.spans.iter().map(|&(a, j)| (a + j) as usize));
        let cycles = Degree2Cycles::new(&gr.interleaver, &owner, &gr.vn_degrees, &starts);
        (0..gr.k)
            .filter(|&m| gr.vn_degrees[m] == 2 && cycles.on_short_cycle(m, spread))
            .count()
    }

    #[test]
    fn conditioned_interleaver_removes_short_cycles() {
        let e = ensemble(1000);
        let uniform = sample_graph(&e, 9);
        assert!(short_cycle_nodes(&uniform, 10) > 0);
        let kind = Interleaver::Conditioned { spread: 10 };
        let gr = sample_graph_with(&e, 9, kind);
        assert_eq!(gr, sample_graph_with(&e, 9, kind));
        gr.validate(25).unwrap();
        assert!(gr.constraint_residuals(&e.partition).iter().all(|&v| v == 0));
        assert_eq!(short_cycle_nodes(&gr, 10), 0);
        for (m, slots) in gr.vn_slots().iter().enumerate() {
            assert_eq!(slots.len(), gr.vn_degrees[m] as usize);
            let checks: std::collections::BTreeSet<u32> = slots.iter().map(|&s| gr.slot_check()[s as usize]).collect();
            assert_eq!(checks.len(), slots.len());
        }
    }

    #[test]
    fn unconstrained_resample_breaks_constraint() {
        let e = ensemble(500);
        let mut gr = sample_graph(&e, 1);
        gr.resample_g_dprime_unconstrained(25, 3);
        let bad = gr.constraint_residuals(&e.partition).iter().filter(|&&v| v != 0).count();
        assert!(bad > 400);
    }

    #[test]
    fn no_repeated_edges() {
        let e = ensemble(1000);
        for seed in 0..20 {
            let gr = sample_graph(&e, seed);
            let sv = gr.slot_vn();
            for &(a, j) in &gr.spans {
                let mut v: Vec<u32> = sv[a as usize..(a + j) as usize].to_vec();
                v.sort_unstable();
                v.dedup();
                assert_eq!(v.len(), j as usize, "seed {seed}");
            }
        }
    }

    #[test]
    fn validate_rejects_corruption() {
        let e = ensemble(500);
        let mut gr = sample_graph(&e, 1);
        gr.interleaver[0] = gr.interleaver[1];
        assert!(gr.validate(25).is_err());
    }
}
