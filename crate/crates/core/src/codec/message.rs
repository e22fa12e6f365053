//! Probability and log-likelihood-ratio vectors over the coset leaders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest accepted deviation of a probability vector's sum from 1.
pub const PROB_TOLERANCE: f64 = 1e-9;

/// Nonnegative weights over the leaders summing to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct ProbVec<T: Real = f64>(Vec<T>);

/// `ω_k = log(ρ₀/ρ_k)`; entry 0 is always 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real + Serialize + serde::de::DeserializeOwned")]
pub struct LlrVec<T: Real = f64>(Vec<T>);

impl<T: Real> ProbVec<T> {
    /// Validates `v` as a probability vector.
    pub fn new(v: Vec<T>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidInput("empty probability vector".into()));
        }
        if v.iter().any(|x| !(*x >= T::zero()) || !x.is_finite()) {
            return Err(Error::InvalidInput("negative or non-finite probability".into()));
        }
        let sum: T = v.iter().copied().sum();
        if (sum - T::one()).abs() > T::lit(PROB_TOLERANCE).max(T::epsilon() * T::lit(64.0)) {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {:?}",
                sum
            )));
        }
        Ok(Self(v))
    }

    /// Normalizes nonnegative weights; entries are floored at [`Real::TINY`].
    pub fn from_weights(mut v: Vec<T>) -> Self {
        normalize_in_place(&mut v);
        Self(v)
    }

    pub fn uniform(q: usize) -> Self {
        Self(vec![T::one() / T::lit(q as f64); q])
    }

    pub fn point_mass(q: usize, k: usize) -> Self {
        let mut v = vec![T::zero(); q];
        v[k] = T::one();
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    /// Index of the largest entry, lowest index on ties.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }

    pub fn to_llr(&self) -> LlrVec<T> {
        let p0 = self.0[0].max(T::TINY);
        LlrVec(self.0.iter().map(|&p| (p0 / p.max(T::TINY)).ln()).collect())
    }

    /// Entry `k` moved to position `k ⊖ χ`, i.e. `out[k] = self[k ⊕ χ]`.
    pub fn shifted(&self, chi: usize, table: &crate::lattice::PartitionTable) -> Self {
        Self((0..self.len()).map(|k| self.0[table.add_idx(k, chi)]).collect())
    }
}

impl<T: Real> LlrVec<T> {
    pub fn new(v: Vec<T>) -> Result<Self> {
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("empty or non-finite LLR vector".into()));
        }
        Ok(Self(v))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    /// `ρ_k ∝ exp(−ω_k)`, evaluated with a max shift.
    pub fn to_prob(&self) -> ProbVec<T> {
        let min = self.0.iter().copied().fold(T::infinity(), T::min);
        ProbVec::from_weights(self.0.iter().map(|&w| (min - w).exp()).collect())
    }
}

pub(crate) fn normalize_in_place<T: Real>(v: &mut [T]) {
    let mut sum = T::zero();
    for x in v.iter_mut() {
        if !(*x >= T::TINY) {
            *x = T::TINY;
        }
        sum += *x;
    }
    let inv = T::one() / sum;
    for x in v.iter_mut() {
        *x *= inv;
    }
}

pub(crate) fn argmax<T: Real>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validation() {
        assert!(ProbVec::new(vec![0.5f64, 0.5]).is_ok());
        assert!(ProbVec::new(vec![0.5f64, 0.6]).is_err());
        assert!(ProbVec::new(vec![-0.1f64, 1.1]).is_err());
        assert!(ProbVec::<f64>::new(vec![]).is_err());
        assert!(ProbVec::new(vec![0.25f32; 4]).is_ok());
    }

    #[test]
    fn llr_of_point_mass_is_large() {
        let p = ProbVec::<f64>::point_mass(25, 0);
        let w = p.to_llr();
        assert_eq!(w.as_slice()[0], 0.0);
        assert!(w.as_slice()[1] > 600.0);
    }

    proptest! {
        #[test]
        fn llr_round_trip(w in proptest::collection::vec(0.01f64..1.0, 25)) {
            let p = ProbVec::from_weights(w);
            let back = p.to_llr().to_prob();
            for (a, b) in p.as_slice().iter().zip(back.as_slice()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            prop_assert_eq!(p.to_llr().as_slice()[0], 0.0);
        }
    }
}
