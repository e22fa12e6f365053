//! Flooding belief propagation over the IRA Tanner graph.
//!
//! Parity node `c_n` touches check `n` (as `c_n⁻¹`, factor `g″_n`) and check
//! `n+1` (as `c_n`, factor `g′_{n+1}`). Check 0 has no previous parity; its
//! `c_{−1} ⊕ g′_0` term is the known constant `g′_0`.

use serde::{Deserialize, Serialize};

use super::check::{CheckKernel, CheckWorkspace};
use super::encode::parity_violations;
use super::graph::TannerGraphInstance;
use super::message::{argmax, normalize_in_place, ProbVec};
use super::variable::multiply_into;
use crate::error::{Error, Result};
use crate::lattice::PartitionTable;
use crate::scalar::Real;

/// Hard decisions after one iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub parity_violations: usize,
    pub u_hat: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub u_hat: Vec<u8>,
    pub c_hat: Vec<u8>,
    pub iterations: usize,
    /// every parity check holds for the final decisions
    pub converged: bool,
    /// per-iteration records when tracing is on
    pub trace: Vec<IterationRecord>,
}

/// Decodes from coset-removed APPs (`app[n]` is the APP of `c_n`).
pub fn bp_decode<T: Real>(
    app: &[ProbVec<T>],
    graph: &TannerGraphInstance,
    table: &PartitionTable,
    max_iter: usize,
) -> Result<DecodeOutcome> {
    let flat: Vec<T> = app.iter().flat_map(|p| p.as_slice().iter().copied()).collect();
    BpDecoder::new(table).decode(&flat, graph, max_iter, false)
}

/// [`bp_decode`] with a per-iteration hard-decision trace.
pub fn bp_decode_traced<T: Real>(
    app: &[ProbVec<T>],
    graph: &TannerGraphInstance,
    table: &PartitionTable,
    max_iter: usize,
) -> Result<DecodeOutcome> {
    let flat: Vec<T> = app.iter().flat_map(|p| p.as_slice().iter().copied()).collect();
    BpDecoder::new(table).decode(&flat, graph, max_iter, true)
}

/// Decoder with precomputed check kernel; reusable across frames.
pub struct BpDecoder<'a, T: Real> {
    table: &'a PartitionTable,
    kernel: CheckKernel<T>,
}

impl<'a, T: Real> BpDecoder<'a, T> {
    pub fn new(table: &'a PartitionTable) -> Self {
        Self {
            table,
            kernel: CheckKernel::new(table),
        }
    }

    /// `app` is row-major, `N × q`.
    pub fn decode(
        &self,
        app: &[T],
        graph: &TannerGraphInstance,
        max_iter: usize,
        trace: bool,
    ) -> Result<DecodeOutcome> {
        self.decode_observed(app, graph, max_iter, trace, |_, _, _| {})
    }

    /// [`Self::decode`] calling `observe(iteration, cn_to_vn, vn_to_cn)` after
    /// each iteration with the slot-indexed information-edge messages.
    pub fn decode_observed(
        &self,
        app: &[T],
        graph: &TannerGraphInstance,
        max_iter: usize,
        trace: bool,
        mut observe: impl FnMut(usize, &[T], &[T]),
    ) -> Result<DecodeOutcome> {
        let q = self.table.size();
        let (k, n, l) = (graph.k, graph.n, graph.l);
        if app.len() != n * q {
            return Err(Error::LengthMismatch {
                expected: n * q,
                found: app.len(),
            });
        }
        if max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        let slot_vn = graph.slot_vn();
        let vn_slots = graph.vn_slots();
        let neg = self.table.neg_table();
        let uniform = T::one() / T::lit(q as f64);

        let mut r_info = vec![uniform; l * q];
        let mut l_info = vec![uniform; l * q];
        let mut r_self = app.to_vec();
        let mut r_next = app.to_vec();
        let mut l_self = vec![uniform; n * q];
        let mut l_next = vec![uniform; n * q];

        let max_j = graph.spans.iter().map(|s| s.1 as usize).max().unwrap_or(0);
        let mut ws: CheckWorkspace<T> = self.kernel.workspace(max_j + 2);
        let mut outs = vec![vec![T::zero(); q]; max_j + 2];
        let mut self_in = vec![T::zero(); q];
        let max_d = graph.vn_degrees.iter().copied().max().unwrap_or(0) as usize;
        let mut prefix = vec![T::zero(); (max_d + 1) * q];
        let mut suffix = vec![T::zero(); q];
        let mut belief = vec![T::zero(); q];

        let mut u_hat = vec![0u8; k];
        let mut c_hat = vec![0u8; n];
        let mut records = Vec::new();
        let mut converged = false;
        let mut iterations = 0;
        let mut h = Vec::with_capacity(max_j + 2);

        for it in 1..=max_iter {
            iterations = it;
            // check nodes
            for (cn, &(a, j)) in graph.spans.iter().enumerate() {
                let (a, j) = (a as usize, j as usize);
                h.clear();
                let mut inputs: Vec<&[T]> = Vec::with_capacity(j + 2);
                for s in a..a + j {
                    inputs.push(&r_info[s * q..(s + 1) * q]);
                    h.push(graph.g[s] as usize);
                }
                let constant = if cn > 0 {
                    inputs.push(&r_next[(cn - 1) * q..cn * q]);
                    h.push(graph.g_prime[cn] as usize);
                    0
                } else {
                    graph.g_prime[0] as usize
                };
                let own = &r_self[cn * q..(cn + 1) * q];
                for (v, slot) in self_in.iter_mut().enumerate() {
                    *slot = own[neg[v] as usize];
                }
                inputs.push(&self_in);
                h.push(graph.g_dprime[cn] as usize);
                let deg = inputs.len();
                self.kernel.update(&inputs, &h, constant, &mut outs[..deg], &mut ws);
                for (i, s) in (a..a + j).enumerate() {
                    l_info[s * q..(s + 1) * q].copy_from_slice(&outs[i]);
                }
                if cn > 0 {
                    l_next[(cn - 1) * q..cn * q].copy_from_slice(&outs[j]);
                }
                let dst = &mut l_self[cn * q..(cn + 1) * q];
                for (c, d) in dst.iter_mut().enumerate() {
                    *d = outs[deg - 1][neg[c] as usize];
                }
            }
            // information nodes
            for (m, slots) in vn_slots.iter().enumerate() {
                let d = slots.len();
                prefix[..q].fill(T::one());
                for (i, &s) in slots.iter().enumerate() {
                    let s = s as usize;
                    let (head, tail) = prefix.split_at_mut((i + 1) * q);
                    tail[..q].copy_from_slice(&head[i * q..]);
                    multiply_into(&mut tail[..q], &l_info[s * q..(s + 1) * q]);
                }
                u_hat[m] = argmax(&prefix[d * q..(d + 1) * q]) as u8;
                suffix.fill(T::one());
                for (i, &s) in slots.iter().enumerate().rev() {
                    let s = s as usize;
                    let out = &mut r_info[s * q..(s + 1) * q];
                    for ((o, &p), &x) in out.iter_mut().zip(&prefix[i * q..(i + 1) * q]).zip(&suffix) {
                        *o = p * x;
                    }
                    normalize_in_place(out);
                    multiply_into(&mut suffix, &l_info[s * q..(s + 1) * q]);
                }
            }
            // parity nodes
            for c in 0..n {
                let ch = &app[c * q..(c + 1) * q];
                let to_self = &mut r_self[c * q..(c + 1) * q];
                to_self.copy_from_slice(ch);
                if c + 1 < n {
                    multiply_into(to_self, &l_next[c * q..(c + 1) * q]);
                }
                normalize_in_place(to_self);
                let to_next = &mut r_next[c * q..(c + 1) * q];
                to_next.copy_from_slice(ch);
                multiply_into(to_next, &l_self[c * q..(c + 1) * q]);
                normalize_in_place(to_next);
                // full belief = to_next ⊙ l_next
                for (b, (&x, &y)) in belief.iter_mut().zip(to_next.iter().zip(&l_next[c * q..(c + 1) * q])) {
                    *b = if c + 1 < n { x * y } else { x };
                }
                c_hat[c] = argmax(&belief) as u8;
            }
            observe(it, &l_info, &r_info);
            let violations = parity_violations(&u_hat, &c_hat, graph, &slot_vn, self.table);
            if trace {
                records.push(IterationRecord {
                    iteration: it,
                    parity_violations: violations,
                    u_hat: u_hat.clone(),
                });
            }
            if violations == 0 {
                converged = true;
                break;
            }
        }
        Ok(DecodeOutcome {
            u_hat,
            c_hat,
            iterations,
            converged,
            trace: records,
        })
    }
}
