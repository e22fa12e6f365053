//! Repeat, interleave, combine, accumulate, add the random coset.

use super::graph::TannerGraphInstance;
use crate::error::{Error, Result};
use crate::lattice::PartitionTable;

/// Codeword before and after the random coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    /// accumulator output `c`
    pub c: Vec<u8>,
    /// transmitted `x = c ⊕ r`
    pub x: Vec<u8>,
}

/// Encodes `u` (leader indices, length `K`) into `x` (length `N`).
pub fn encode(u: &[u8], graph: &TannerGraphInstance, table: &PartitionTable) -> Result<Vec<u8>> {
    Ok(encode_full(u, graph, table)?.x)
}

/// Encodes and keeps the pre-coset sequence `c`.
///
/// `s_n = ⊕(z ⊕ g)` over the span of check `n`,
/// `c_n = (s_n ⊕ (c_{n−1} ⊕ g′_n)) ⊕ g″_n` with `c_{−1} = ψ₀`.
pub fn encode_full(u: &[u8], graph: &TannerGraphInstance, table: &PartitionTable) -> Result<Codeword> {
    if u.len() != graph.k {
        return Err(Error::LengthMismatch {
            expected: graph.k,
            found: u.len(),
        });
    }
    let q = table.size();
    if let Some(&bad) = u.iter().find(|&&v| v as usize >= q) {
        return Err(Error::InvalidInput(format!("symbol {bad} outside the partition")));
    }
    let slot_vn = graph.slot_vn();
    let mut c = Vec::with_capacity(graph.n);
    let mut x = Vec::with_capacity(graph.n);
    let mut prev = 0usize;
    for (n, &(a, j)) in graph.spans.iter().enumerate() {
        let mut s = 0usize;
        for slot in a as usize..(a + j) as usize {
            let z = u[slot_vn[slot] as usize] as usize;
            s = table.add_idx(s, table.add_idx(z, graph.g[slot] as usize));
        }
        let acc = table.add_idx(prev, graph.g_prime[n] as usize);
        let cn = table.add_idx(table.add_idx(s, acc), graph.g_dprime[n] as usize);
        c.push(cn as u8);
        x.push(table.add_idx(cn, graph.r[n] as usize) as u8);
        prev = cn;
    }
    Ok(Codeword { c, x })
}

/// Number of checks violated by the hard decisions `u`, `c`.
pub fn parity_violations(
    u: &[u8],
    c: &[u8],
    graph: &TannerGraphInstance,
    slot_vn: &[u32],
    table: &PartitionTable,
) -> usize {
    let mut bad = 0;
    let mut prev = 0usize;
    for (n, &(a, j)) in graph.spans.iter().enumerate() {
        let mut acc = table.add_idx(prev, graph.g_prime[n] as usize);
        for slot in a as usize..(a + j) as usize {
            let z = u[slot_vn[slot] as usize] as usize;
            acc = table.add_idx(acc, table.add_idx(z, graph.g[slot] as usize));
        }
        let own = table.add_idx(table.neg_idx(c[n] as usize), graph.g_dprime[n] as usize);
        if table.add_idx(acc, own) != 0 {
            bad += 1;
        }
        prev = c[n] as usize;
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::ensemble::make_ensemble;
    use crate::codec::graph::sample_graph;
    use crate::codec::presets::Preset;
    use rand::Rng;

    fn setup() -> (PartitionTable, TannerGraphInstance) {
        let t = PartitionTable::hurwitz_1_2i();
        let p = Preset::Rate2_3;
        let e = make_ensemble(&p.edge_vn(), &p.edge_cn(), &t, 600).unwrap();
        let g = sample_graph(&e, 11);
        (t, g)
    }

    #[test]
    fn zero_sequences_give_zero_codeword() {
        let (t, mut g) = setup();
        for s in [&mut g.g, &mut g.g_prime, &mut g.g_dprime, &mut g.r] {
            s.iter_mut().for_each(|v| *v = 0);
        }
        let x = encode(&vec![0; g.k], &g, &t).unwrap();
        assert!(x.iter().all(|&v| v == 0));
    }

    #[test]
    fn zero_message_gives_zero_precoset_codeword() {
        let (t, g) = setup();
        let cw = encode_full(&vec![0; g.k], &g, &t).unwrap();
        assert!(cw.c.iter().all(|&v| v == 0));
        assert_eq!(cw.x, g.r);
    }

    #[test]
    fn encoded_words_satisfy_all_checks() {
        let (t, g) = setup();
        let mut rng = crate::rng::stream(1, 0);
        let u: Vec<u8> = (0..g.k).map(|_| rng.random_range(0..25)).collect();
        let cw = encode_full(&u, &g, &t).unwrap();
        assert_eq!(parity_violations(&u, &cw.c, &g, &g.slot_vn(), &t), 0);
        let mut c2 = cw.c.clone();
        c2[10] = t.add_idx(c2[10] as usize, 1) as u8;
        assert_eq!(parity_violations(&u, &c2, &g, &g.slot_vn(), &t), 2);
    }

    #[test]
    fn rejects_bad_input() {
        let (t, g) = setup();
        assert!(matches!(encode(&[0; 3], &g, &t), Err(Error::LengthMismatch { .. })));
        assert!(encode(&vec![30; g.k], &g, &t).is_err());
    }
}
