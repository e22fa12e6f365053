//! Nearest-point quantizers for ℍ, ℤ[i] and ℤⁿ.
//!
//! ℍ is the union of ℤ⁴ and ℤ⁴ + ½𝟙, so its closest point is the better of
//! the two coset roundings. Each coordinate rounds half-down and the two
//! candidates are compared on doubled coordinates; this yields the
//! lexicographically smallest doubled vector among all nearest points, a
//! rule that is translation invariant and so keeps `mod ξ` canonical.

use std::cmp::Ordering;

use super::hurwitz::HurwitzInteger;
use crate::error::{Error, Result};
use crate::scalar::Coord;

/// Closest Hurwitz integer to `x`.
pub fn quantize_hurwitz<S: Coord>(x: &[S; 4]) -> Result<HurwitzInteger> {
    let d = nearest_hurwitz_doubled(x)?;
    HurwitzInteger::from_doubled(d)
}

/// Closest point of ℍ in doubled coordinates.
pub fn nearest_hurwitz_doubled<S: Coord>(x: &[S; 4]) -> Result<[i64; 4]> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let half = S::from_ratio(1, 2);
    let mut int_pt = [0i64; 4];
    let mut half_pt = [0i64; 4];
    let mut d_int = S::zero();
    let mut d_half = S::zero();
    for (i, v) in x.iter().enumerate() {
        let r = (v.clone() - half.clone()).ceil();
        let h = (v.clone() - S::one()).ceil();
        let e_int = v.clone() - r.clone();
        let e_half = v.clone() - h.clone() - half.clone();
        d_int = d_int + e_int.clone() * e_int;
        d_half = d_half + e_half.clone() * e_half;
        int_pt[i] = 2 * r.integral().ok_or(Error::NonFinite)?;
        half_pt[i] = 2 * h.integral().ok_or(Error::NonFinite)? + 1;
    }
    Ok(match d_int.partial_cmp(&d_half) {
        Some(Ordering::Less) => int_pt,
        Some(Ordering::Greater) => half_pt,
        _ => int_pt.min(half_pt),
    })
}

/// Exact variant for `x = numer / denom` (`denom > 0`), in doubled
/// coordinates. Used by the `mod ξ` reduction.
pub fn nearest_hurwitz_scaled(numer: [i64; 4], denom: i64) -> [i64; 4] {
    assert!(denom > 0, "denominator must be positive");
    let mut int_pt = [0i64; 4];
    let mut half_pt = [0i64; 4];
    let (mut d_int, mut d_half) = (0i128, 0i128);
    for i in 0..4 {
        let c = ceil_div(2 * numer[i] - denom, 2 * denom);
        let h = ceil_div(numer[i] - denom, denom);
        int_pt[i] = 2 * c;
        half_pt[i] = 2 * h + 1;
        // x − D/2 = (2·numer − denom·D) / (2·denom)
        let e_int = 2 * numer[i] as i128 - denom as i128 * int_pt[i] as i128;
        let e_half = 2 * numer[i] as i128 - denom as i128 * half_pt[i] as i128;
        d_int += e_int * e_int;
        d_half += e_half * e_half;
    }
    match d_int.cmp(&d_half) {
        Ordering::Less => int_pt,
        Ordering::Greater => half_pt,
        Ordering::Equal => int_pt.min(half_pt),
    }
}

/// Closest Gaussian integer, rounding each coordinate half-down.
pub fn nearest_gaussian<S: Coord>(x: &[S; 2]) -> Result<[i64; 2]> {
    let half = S::from_ratio(1, 2);
    let mut out = [0i64; 2];
    for (o, v) in out.iter_mut().zip(x) {
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        *o = (v.clone() - half.clone())
            .ceil()
            .integral()
            .ok_or(Error::NonFinite)?;
    }
    Ok(out)
}

pub fn nearest_gaussian_scaled(numer: [i64; 2], denom: i64) -> [i64; 2] {
    assert!(denom > 0, "denominator must be positive");
    numer.map(|v| ceil_div(2 * v - denom, 2 * denom))
}

/// Closest point of ℤⁿ, half-down per coordinate.
pub fn nearest_integer<S: Coord>(x: &[S]) -> Result<Vec<i64>> {
    let half = S::from_ratio(1, 2);
    x.iter()
        .map(|v| {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            (v.clone() - half.clone())
                .ceil()
                .integral()
                .ok_or(Error::NonFinite)
        })
        .collect()
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use proptest::prelude::*;

    /// Exhaustive search over doubled points within distance 2 of `x`.
    fn brute_force(x: [f64; 4]) -> [i64; 4] {
        let lo: Vec<i64> = x.iter().map(|v| (2.0 * v).floor() as i64 - 4).collect();
        let mut best: Option<(f64, [i64; 4])> = None;
        for a in lo[0]..=lo[0] + 9 {
            for b in lo[1]..=lo[1] + 9 {
                for c in lo[2]..=lo[2] + 9 {
                    for d in lo[3]..=lo[3] + 9 {
                        let p = [a, b, c, d];
                        let par = a.rem_euclid(2);
                        if p.iter().any(|v| v.rem_euclid(2) != par) {
                            continue;
                        }
                        let dist: f64 =
                            (0..4).map(|i| (x[i] - p[i] as f64 / 2.0).powi(2)).sum();
                        if dist > 4.0 {
                            continue;
                        }
                        let better = match best {
                            None => true,
                            Some((bd, bp)) => dist < bd || (dist == bd && p < bp),
                        };
                        if better {
                            best = Some((dist, p));
                        }
                    }
                }
            }
        }
        best.unwrap().1
    }

    #[test]
    fn examples() {
        let zero = nearest_hurwitz_doubled(&[0.1f64; 4]).unwrap();
        assert_eq!(zero, [0; 4]);
        let half = nearest_hurwitz_doubled(&[0.4f64; 4]).unwrap();
        assert_eq!(half, [1; 4]);
        assert_eq!(brute_force([0.4; 4]), [1; 4]);
        let p = [3, -1, 5, 7];
        let x = p.map(|v| v as f64 / 2.0);
        assert_eq!(nearest_hurwitz_doubled(&x).unwrap(), p);
    }

    #[test]
    fn ties_break_to_lexicographically_smallest() {
        // (½,0,0,0) is equidistant from 0 and 1; every half-integer point is farther.
        assert_eq!(nearest_hurwitz_doubled(&[0.5f64, 0.0, 0.0, 0.0]).unwrap(), [0; 4]);
        assert_eq!(brute_force([0.5, 0.0, 0.0, 0.0]), [0; 4]);
        // (¼,¼,¼,¼) is equidistant from 0 and ω.
        let q = [0.25f64; 4];
        assert_eq!(nearest_hurwitz_doubled(&q).unwrap(), brute_force(q));
    }

    #[test]
    fn non_finite_is_rejected() {
        assert!(matches!(
            nearest_hurwitz_doubled(&[f64::NAN, 0.0, 0.0, 0.0]),
            Err(Error::NonFinite)
        ));
        assert!(nearest_gaussian(&[f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn single_precision_input() {
        let q = quantize_hurwitz(&[0.4f32, 0.45, 0.6, 0.55]).unwrap();
        assert_eq!(q.doubled(), [1; 4]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(x in proptest::array::uniform4(-4.0f64..4.0)) {
            prop_assert_eq!(nearest_hurwitz_doubled(&x).unwrap(), brute_force(x));
        }

        #[test]
        fn scaled_integer_path_matches_rational_path(
            numer in proptest::array::uniform4(-200i64..200),
            denom in 1i64..40,
        ) {
            let x = numer.map(|v| Rational64::new(v, denom));
            prop_assert_eq!(nearest_hurwitz_scaled(numer, denom), nearest_hurwitz_doubled(&x).unwrap());
            let g = [numer[0], numer[1]];
            let gx = [Rational64::new(g[0], denom), Rational64::new(g[1], denom)];
            prop_assert_eq!(nearest_gaussian_scaled(g, denom), nearest_gaussian(&gx).unwrap());
        }

        #[test]
        fn lattice_points_are_fixed(d in proptest::array::uniform4(-20i64..20), half in any::<bool>()) {
            let p = d.map(|v| 2 * v + half as i64);
            let x = p.map(|v| v as f64 / 2.0);
            prop_assert_eq!(nearest_hurwitz_doubled(&x).unwrap(), p);
        }
    }
}
