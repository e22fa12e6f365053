//! Quotient `R/ξR` of a lattice ring by a principal left ideal.
//!
//! The table enumerates canonical coset leaders, precomputes the ⊕/⊖ index
//! tables and exposes the group isomorphism `φ: 𝔽_p^M → R/ξR` that the
//! check-node DFT relies on. Everything downstream works on leader indices
//! `0..q` with index 0 the zero leader.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::gaussian::GaussianInteger;
use super::hurwitz::HurwitzInteger;
use crate::error::{Error, Result};

/// Ring the partition is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Hurwitz,
    Gaussian,
}

impl RingKind {
    /// Real dimension of one lattice point.
    pub fn real_dim(self) -> usize {
        match self {
            RingKind::Hurwitz => 4,
            RingKind::Gaussian => 2,
        }
    }

    /// Complex channel uses needed per lattice point.
    pub fn complex_dim(self) -> usize {
        self.real_dim() / 2
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingKind::Hurwitz => "hurwitz",
            RingKind::Gaussian => "gaussian",
        })
    }
}

impl FromStr for RingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hurwitz" | "h" => Ok(RingKind::Hurwitz),
            "gaussian" | "zi" | "z[i]" => Ok(RingKind::Gaussian),
            other => Err(Error::InvalidInput(format!("unknown ring {other:?}"))),
        }
    }
}

/// Lattice rings that can be reduced modulo a principal left ideal.
pub trait IdealRing:
    Copy + Eq + Ord + Hash + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    const KIND: RingKind;

    fn zero() -> Self;
    fn norm_i64(&self) -> i64;
    fn reduce(&self, xi: &Self) -> Result<Self>;
    /// All ring points with every coordinate in `[-radius, radius]`.
    fn box_points(radius: i64) -> Vec<Self>;
    /// Coordinates doubled and padded to four entries.
    fn doubled4(&self) -> [i64; 4];
    fn from_doubled4(d: [i64; 4]) -> Result<Self>;
    /// `|R/ξR|` predicted from the norm of ξ.
    fn quotient_size(xi: &Self) -> usize;
}

impl IdealRing for HurwitzInteger<i64> {
    const KIND: RingKind = RingKind::Hurwitz;

    fn zero() -> Self {
        HurwitzInteger::zero()
    }
    fn norm_i64(&self) -> i64 {
        self.norm()
    }
    fn reduce(&self, xi: &Self) -> Result<Self> {
        self.mod_xi(xi)
    }
    fn box_points(radius: i64) -> Vec<Self> {
        let r2 = 2 * radius;
        let mut out = Vec::new();
        for parity in [0i64, 1] {
            let vals: Vec<i64> = (-r2..=r2).filter(|v| v.rem_euclid(2) == parity).collect();
            for &a in &vals {
                for &b in &vals {
                    for &c in &vals {
                        for &d in &vals {
                            out.push(HurwitzInteger::from_doubled([a, b, c, d]).expect("parity"));
                        }
                    }
                }
            }
        }
        out
    }
    fn doubled4(&self) -> [i64; 4] {
        self.doubled()
    }
    fn from_doubled4(d: [i64; 4]) -> Result<Self> {
        HurwitzInteger::from_doubled(d)
    }
    fn quotient_size(xi: &Self) -> usize {
        (xi.norm() * xi.norm()) as usize
    }
}

impl IdealRing for GaussianInteger<i64> {
    const KIND: RingKind = RingKind::Gaussian;

    fn zero() -> Self {
        GaussianInteger::zero()
    }
    fn norm_i64(&self) -> i64 {
        self.norm()
    }
    fn reduce(&self, xi: &Self) -> Result<Self> {
        self.mod_xi(xi)
    }
    fn box_points(radius: i64) -> Vec<Self> {
        let mut out = Vec::new();
        for re in -radius..=radius {
            for im in -radius..=radius {
                out.push(GaussianInteger::new(re, im));
            }
        }
        out
    }
    fn doubled4(&self) -> [i64; 4] {
        [2 * self.re, 2 * self.im, 0, 0]
    }
    fn from_doubled4(d: [i64; 4]) -> Result<Self> {
        if d[0] % 2 != 0 || d[1] % 2 != 0 || d[2] != 0 || d[3] != 0 {
            return Err(Error::InvalidInput(format!("{d:?} is not a Gaussian integer")));
        }
        Ok(GaussianInteger::new(d[0] / 2, d[1] / 2))
    }
    fn quotient_size(xi: &Self) -> usize {
        xi.norm() as usize
    }
}

/// Enumerated quotient group with index-level arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionDocument", into = "PartitionDocument")]
pub struct PartitionTable {
    ring: RingKind,
    xi: [i64; 4],
    p: usize,
    m: usize,
    leaders: Vec<[i64; 4]>,
    add: Vec<u32>,
    sub: Vec<u32>,
    neg: Vec<u32>,
    /// flat 𝔽_p^M coordinate index (little-endian digits) → leader index
    phi: Vec<u32>,
    /// leader index → flat coordinate index
    phi_inv: Vec<u32>,
}

impl PartitionTable {
    /// Builds `ring / ξ·ring` with `xi` given as a ring element string such as `1+2i`.
    pub fn build(xi: &str, ring: RingKind) -> Result<Self> {
        match ring {
            RingKind::Hurwitz => Self::from_ring(xi.parse::<HurwitzInteger>()?),
            RingKind::Gaussian => Self::from_ring(xi.parse::<GaussianInteger>()?),
        }
    }

    /// The 25-coset partition ℍ/(1+2i)ℍ.
    pub fn hurwitz_1_2i() -> Self {
        Self::from_ring(HurwitzInteger::new(1, 2, 0, 0)).expect("ℍ/(1+2i)ℍ is well formed")
    }

    /// The 5-coset partition ℤ[i]/(1+2i)ℤ[i].
    pub fn gaussian_1_2i() -> Self {
        Self::from_ring(GaussianInteger::new(1, 2)).expect("ℤ[i]/(1+2i) is well formed")
    }

    pub fn from_ring<R: IdealRing>(xi: R) -> Result<Self> {
        let n = xi.norm_i64();
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        let expected = R::quotient_size(&xi);
        let mut set = BTreeSet::new();
        for pt in R::box_points(n) {
            set.insert(pt.reduce(&xi)?);
        }
        if set.len() != expected {
            return Err(Error::PartitionCount {
                expected,
                found: set.len(),
            });
        }
        let mut leaders: Vec<R> = set.into_iter().collect();
        leaders.sort_by_key(|l| (l.norm_i64(), l.doubled4()));
        debug_assert_eq!(leaders[0], R::zero());

        let q = leaders.len();
        let index: HashMap<R, u32> = leaders
            .iter()
            .enumerate()
            .map(|(i, l)| (*l, i as u32))
            .collect();
        let lookup = |v: R| -> Result<u32> {
            let r = v.reduce(&xi)?;
            index.get(&r).copied().ok_or_else(|| Error::PartitionCount {
                expected,
                found: q + 1,
            })
        };
        let mut add = vec![0u32; q * q];
        let mut sub = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = lookup(leaders[a] + leaders[b])?;
                sub[a * q + b] = lookup(leaders[a] - leaders[b])?;
            }
        }
        let neg = (0..q).map(|a| sub[a]).collect();

        let mut table = PartitionTable {
            ring: R::KIND,
            xi: xi.doubled4(),
            p: 1,
            m: 0,
            leaders: leaders.iter().map(|l| l.doubled4()).collect(),
            add,
            sub,
            neg,
            phi: vec![0],
            phi_inv: vec![0; q],
        };
        table.build_phi()?;
        Ok(table)
    }

    /// Picks generators greedily in leader order and maps 𝔽_p^M onto the group.
    fn build_phi(&mut self) -> Result<()> {
        let q = self.size();
        if q == 1 {
            return Ok(());
        }
        let order = |a: usize| -> usize {
            let (mut acc, mut k) = (a, 1);
            while acc != 0 {
                acc = self.add_idx(acc, a);
                k += 1;
            }
            k
        };
        let p = order(1);
        if (1..q).any(|a| order(a) != p) {
            return Err(Error::NotElementaryAbelian(format!(
                "element orders differ from {p}"
            )));
        }
        let mut span: Vec<usize> = vec![0];
        let mut gens = Vec::new();
        while span.len() < q {
            let g = (1..q)
                .find(|a| !span.contains(a))
                .expect("span is a proper subgroup");
            gens.push(g);
            let mut next = Vec::with_capacity(span.len() * p);
            // digit of the new generator is the slowest-varying one
            let mut mult = 0usize;
            for _ in 0..p {
                next.extend(span.iter().map(|&s| self.add_idx(s, mult)));
                mult = self.add_idx(mult, g);
            }
            span = next;
        }
        if span.len() != q {
            return Err(Error::NotElementaryAbelian(format!(
                "|group| = {q} is not a power of {p}"
            )));
        }
        let mut inv = vec![u32::MAX; q];
        for (flat, &leader) in span.iter().enumerate() {
            if inv[leader] != u32::MAX {
                return Err(Error::NotElementaryAbelian("generators are dependent".into()));
            }
            inv[leader] = flat as u32;
        }
        self.p = p;
        self.m = gens.len();
        self.phi = span.into_iter().map(|v| v as u32).collect();
        self.phi_inv = inv;
        Ok(())
    }

    pub fn ring(&self) -> RingKind {
        self.ring
    }

    /// Doubled coordinates of ξ.
    pub fn xi(&self) -> [i64; 4] {
        self.xi
    }

    /// Number of cosets.
    pub fn size(&self) -> usize {
        self.leaders.len()
    }

    /// Characteristic `p` of the quotient group.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of 𝔽_p coordinates.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Leaders in doubled coordinates, index 0 is the origin.
    pub fn leaders(&self) -> &[[i64; 4]] {
        &self.leaders
    }

    /// Leader as real coordinates (`real_dim` entries).
    pub fn leader_f64(&self, idx: usize) -> Vec<f64> {
        self.leaders[idx][..self.ring.real_dim()]
            .iter()
            .map(|&v| v as f64 / 2.0)
            .collect()
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size() + b] as usize
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.sub[a * self.size() + b] as usize
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    /// Row `a` of the ⊕ table.
    pub fn add_row(&self, a: usize) -> &[u32] {
        let q = self.size();
        &self.add[a * q..(a + 1) * q]
    }

    pub fn neg_table(&self) -> &[u32] {
        &self.neg
    }

    /// φ applied to a flat 𝔽_p^M index (digit `m` has weight `p^m`).
    pub fn phi(&self, flat: usize) -> usize {
        self.phi[flat] as usize
    }

    /// Flat 𝔽_p^M index of a leader.
    pub fn phi_inverse(&self, leader: usize) -> usize {
        self.phi_inv[leader] as usize
    }

    pub fn phi_table(&self) -> &[u32] {
        &self.phi
    }

    /// φ applied to explicit digits.
    pub fn phi_digits(&self, digits: &[usize]) -> usize {
        let mut flat = 0;
        for &d in digits.iter().rev() {
            flat = flat * self.p + d % self.p;
        }
        self.phi(flat)
    }

    /// Squared Euclidean norm of a leader.
    pub fn leader_energy(&self, idx: usize) -> f64 {
        self.leaders[idx].iter().map(|&v| (v * v) as f64).sum::<f64>() / 4.0
    }

    /// SHA-256 of the canonical JSON document.
    pub fn digest(&self) -> String {
        let json = self.to_json().expect("table serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PartitionDocument::from(self))?)
    }

    /// Loads a table and checks it against a fresh enumeration.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PartitionDocument = serde_json::from_str(s)?;
        Self::try_from(doc)
    }
}

impl TryFrom<PartitionDocument> for PartitionTable {
    type Error = Error;

    fn try_from(doc: PartitionDocument) -> Result<Self> {
        let rebuilt = match doc.ring {
            RingKind::Hurwitz => Self::from_ring(HurwitzInteger::from_doubled4(doc.xi)?)?,
            RingKind::Gaussian => Self::from_ring(GaussianInteger::from_doubled4(doc.xi)?)?,
        };
        if PartitionDocument::from(&rebuilt) != doc {
            return Err(Error::Corrupt(
                "partition document does not match the canonical table".into(),
            ));
        }
        Ok(rebuilt)
    }
}

impl From<PartitionTable> for PartitionDocument {
    fn from(t: PartitionTable) -> Self {
        PartitionDocument::from(&t)
    }
}

/// On-disk form of a [`PartitionTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDocument {
    pub ring: RingKind,
    /// ξ in doubled coordinates
    pub xi: [i64; 4],
    pub p: usize,
    pub m: usize,
    /// doubled-coordinate quadruples
    pub leaders: Vec<[i64; 4]>,
    pub add_table: Vec<Vec<u32>>,
    pub sub_table: Vec<Vec<u32>>,
    /// flat 𝔽_p^M index → leader index
    pub phi_index: Vec<u32>,
}

impl From<&PartitionTable> for PartitionDocument {
    fn from(t: &PartitionTable) -> Self {
        let q = t.size();
        let rows = |v: &[u32]| v.chunks(q).map(|r| r.to_vec()).collect();
        PartitionDocument {
            ring: t.ring,
            xi: t.xi,
            p: t.p,
            m: t.m,
            leaders: t.leaders.clone(),
            add_table: rows(&t.add),
            sub_table: rows(&t.sub),
            phi_index: t.phi.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_partition_has_25_leaders() {
        let t = PartitionTable::hurwitz_1_2i();
        assert_eq!(t.size(), 25);
        assert_eq!(t.p(), 5);
        assert_eq!(t.m(), 2);
        assert_eq!(t.leaders()[0], [0; 4]);
        // the leaders are 0 and the 24 units of ℍ
        for idx in 1..25 {
            assert_eq!(t.leader_energy(idx), 1.0);
        }
    }

    #[test]
    fn trivial_and_gaussian_partitions() {
        let one = PartitionTable::build("1", RingKind::Hurwitz).unwrap();
        assert_eq!(one.size(), 1);
        let g = PartitionTable::gaussian_1_2i();
        assert_eq!(g.size(), 5);
        assert_eq!((g.p(), g.m()), (5, 1));
        assert_eq!(g.ring().complex_dim(), 1);
    }

    #[test]
    fn zero_modulus_is_rejected() {
        assert!(matches!(
            PartitionTable::build("0", RingKind::Gaussian),
            Err(Error::ZeroModulus)
        ));
    }

    #[test]
    fn group_axioms_hold_exhaustively() {
        for t in [PartitionTable::hurwitz_1_2i(), PartitionTable::gaussian_1_2i()] {
            let q = t.size();
            for a in 0..q {
                assert_eq!(t.add_idx(a, 0), a);
                assert_eq!(t.add_idx(a, t.neg_idx(a)), 0);
                for b in 0..q {
                    assert_eq!(t.add_idx(a, b), t.add_idx(b, a));
                    assert_eq!(t.sub_idx(t.add_idx(a, b), b), a);
                    for c in 0..q {
                        assert_eq!(
                            t.add_idx(t.add_idx(a, b), c),
                            t.add_idx(a, t.add_idx(b, c))
                        );
                    }
                }
                let row: BTreeSet<u32> = t.add_row(a).iter().copied().collect();
                assert_eq!(row.len(), q, "row {a} is not a permutation");
            }
        }
    }

    #[test]
    fn phi_is_a_homomorphism() {
        let t = PartitionTable::hurwitz_1_2i();
        let p = t.p();
        for a in 0..t.size() {
            for b in 0..t.size() {
                let da = [a % p, a / p];
                let db = [b % p, b / p];
                let sum = [(da[0] + db[0]) % p, (da[1] + db[1]) % p];
                assert_eq!(
                    t.phi_digits(&sum),
                    t.add_idx(t.phi_digits(&da), t.phi_digits(&db))
                );
            }
        }
        for l in 0..t.size() {
            assert_eq!(t.phi(t.phi_inverse(l)), l);
        }
    }

    #[test]
    fn json_round_trip_and_tamper_detection() {
        let t = PartitionTable::hurwitz_1_2i();
        let json = t.to_json().unwrap();
        assert_eq!(PartitionTable::from_json(&json).unwrap(), t);
        let mut doc: PartitionDocument = serde_json::from_str(&json).unwrap();
        doc.add_table[3][4] = 0;
        let bad = serde_json::to_string(&doc).unwrap();
        assert!(matches!(PartitionTable::from_json(&bad), Err(Error::Corrupt(_))));
        assert_eq!(t.digest().len(), 64);
    }
}
