//! Variable-node update: product of the prior and the other incoming messages.

use super::message::{normalize_in_place, ProbVec};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Message from a variable node on one edge. `incoming` holds the messages
/// on all other edges; `prior` is the channel APP, uniform when `None`.
pub fn vn_update<T: Real>(incoming: &[ProbVec<T>], prior: Option<&ProbVec<T>>) -> Result<ProbVec<T>> {
    let q = match (incoming.first(), prior) {
        (Some(p), _) | (None, Some(p)) => p.len(),
        (None, None) => return Err(Error::InvalidInput("no messages to combine".into())),
    };
    if incoming.iter().chain(prior).any(|p| p.len() != q) {
        return Err(Error::InvalidInput("message lengths differ".into()));
    }
    let mut out = match prior {
        Some(p) => p.as_slice().to_vec(),
        None => vec![T::one(); q],
    };
    for m in incoming {
        multiply_into(&mut out, m.as_slice());
    }
    Ok(ProbVec::from_weights(out))
}

/// `acc ← acc ⊙ m`, renormalized when the running product gets small.
#[inline]
pub(crate) fn multiply_into<T: Real>(acc: &mut [T], m: &[T]) {
    let mut max = T::zero();
    for (a, &b) in acc.iter_mut().zip(m) {
        *a *= b;
        if *a > max {
            max = *a;
        }
    }
    if max < T::TINY.sqrt() {
        normalize_in_place(acc);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities() {
        let mut rng = crate::rng::stream(1, 0);
        let r: ProbVec<f64> = ProbVec::from_weights((0..25).map(|_| rand::Rng::random::<f64>(&mut rng)).collect());
        let out = vn_update(&[r.clone()], None).unwrap();
        for (a, b) in out.as_slice().iter().zip(r.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
        let pm = ProbVec::<f64>::point_mass(25, 7);
        assert_eq!(vn_update(&[pm.clone(), pm.clone()], None).unwrap().argmax(), 7);
        assert!(vn_update::<f64>(&[], None).is_err());
    }

    #[test]
    fn underflow_is_clipped() {
        let a = ProbVec::<f64>::point_mass(25, 1);
        let b = ProbVec::<f64>::point_mass(25, 2);
        let out = vn_update(&[a, b], None).unwrap();
        let s: f64 = out.as_slice().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(out.as_slice().iter().all(|v| v.is_finite() && *v >= 0.0));
    }
}
