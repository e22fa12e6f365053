//! Hurwitz quaternion integers `a + bi + cj + dk` with all coordinates in ℤ
//! or all in ℤ + ½.
//!
//! Coordinates are stored doubled, so every point has an exact integer
//! representation and the parity rule is a simple check: the four doubled
//! coordinates are either all even or all odd.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::NumCast;
use serde::{Deserialize, Serialize};

use super::quantize::nearest_hurwitz_scaled;
use crate::error::{Error, Result};
use crate::scalar::LatticeInt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct HurwitzInteger<T: LatticeInt = i64> {
    doubled: [T; 4],
}

impl<T: LatticeInt> HurwitzInteger<T> {
    /// Build from doubled coordinates `[2a, 2b, 2c, 2d]`.
    pub fn from_doubled(doubled: [T; 4]) -> Result<Self> {
        let two = T::one() + T::one();
        let odd = doubled.map(|v| v % two != T::zero());
        if odd.iter().all(|&o| o) || odd.iter().all(|&o| !o) {
            Ok(Self { doubled })
        } else {
            Err(Error::InvalidHurwitz(doubled.map(|v| v.to_i64().unwrap_or(i64::MAX))))
        }
    }

    /// Integer-coordinate point `a + bi + cj + dk`.
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        let two = T::one() + T::one();
        Self {
            doubled: [a * two, b * two, c * two, d * two],
        }
    }

    pub fn zero() -> Self {
        Self { doubled: [T::zero(); 4] }
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// `½(1 + i + j + k)`.
    pub fn omega() -> Self {
        Self {
            doubled: [T::one(); 4],
        }
    }

    pub fn doubled(&self) -> [T; 4] {
        self.doubled
    }

    pub fn is_half_integer(&self) -> bool {
        let two = T::one() + T::one();
        self.doubled[0] % two != T::zero()
    }

    /// Real coordinates `(a, b, c, d)`.
    pub fn to_f64(&self) -> [f64; 4] {
        self.doubled
            .map(|v| v.to_f64().expect("coordinate fits f64") / 2.0)
    }

    /// `a² + b² + c² + d²`; always an integer on ℍ.
    pub fn norm(&self) -> T {
        let sum = self
            .doubled
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v);
        sum / (T::one() + T::one() + T::one() + T::one())
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.doubled;
        Self {
            doubled: [a, -b, -c, -d],
        }
    }

    pub fn cast<U: LatticeInt>(&self) -> Option<HurwitzInteger<U>> {
        let mut out = [U::zero(); 4];
        for (o, v) in out.iter_mut().zip(self.doubled) {
            *o = <U as NumCast>::from(v)?;
        }
        Some(HurwitzInteger { doubled: out })
    }

    /// `λ mod ξℍ = λ − ξ·Q(ξ⁻¹λ)` for the left ideal `ξℍ`.
    ///
    /// Left division uses `ξ⁻¹ = conj(ξ)/N(ξ)`; the quantization is exact.
    /// The result is the canonical leader of the coset of `λ`.
    pub fn mod_xi(&self, xi: &Self) -> Result<Self> {
        let n = xi.norm();
        if n == T::zero() {
            return Err(Error::ZeroModulus);
        }
        let x = self.cast::<i64>().ok_or_else(overflow)?;
        let xi64 = xi.cast::<i64>().ok_or_else(overflow)?;
        let numer = (xi64.conj() * x).doubled;
        // ξ⁻¹λ has real coordinates numer / (2 N(ξ)).
        let q = nearest_hurwitz_scaled(numer, 2 * n.to_i64().ok_or_else(overflow)?);
        let q = HurwitzInteger::<i64> { doubled: q };
        let reduced = x - xi64 * q;
        reduced.cast::<T>().ok_or_else(overflow)
    }
}

fn overflow() -> Error {
    Error::InvalidInput("coordinate overflow".into())
}

impl<T: LatticeInt> Add for HurwitzInteger<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut doubled = self.doubled;
        for (a, b) in doubled.iter_mut().zip(rhs.doubled) {
            *a = *a + b;
        }
        Self { doubled }
    }
}

impl<T: LatticeInt> Sub for HurwitzInteger<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: LatticeInt> Neg for HurwitzInteger<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            doubled: self.doubled.map(|v| -v),
        }
    }
}

impl<T: LatticeInt> Mul for HurwitzInteger<T> {
    type Output = Self;

    /// Hamilton product with `i² = j² = k² = ijk = −1`, left operand first.
    fn mul(self, rhs: Self) -> Self {
        let [a1, b1, c1, d1] = self.doubled;
        let [a2, b2, c2, d2] = rhs.doubled;
        let prod = [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ];
        // (A/2)(B/2) = AB/4, so the doubled product is AB/2; exact on ℍ.
        let two = T::one() + T::one();
        Self {
            doubled: prod.map(|v| v / two),
        }
    }
}

impl<T: LatticeInt> TryFrom<[i64; 4]> for HurwitzInteger<T> {
    type Error = Error;
    fn try_from(d: [i64; 4]) -> Result<Self> {
        let mut out = [T::zero(); 4];
        for (o, v) in out.iter_mut().zip(d) {
            *o = <T as NumCast>::from(v).ok_or_else(overflow)?;
        }
        Self::from_doubled(out)
    }
}

impl<T: LatticeInt> From<HurwitzInteger<T>> for [i64; 4] {
    fn from(h: HurwitzInteger<T>) -> Self {
        h.doubled.map(|v| v.to_i64().expect("coordinate fits i64"))
    }
}

impl<T: LatticeInt> fmt::Debug for HurwitzInteger<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{:?}", self.to_f64())
    }
}

impl<T: LatticeInt> fmt::Display for HurwitzInteger<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.to_f64();
        let mut first = true;
        for (v, unit) in c.iter().zip(["", "i", "j", "k"]) {
            if *v == 0.0 {
                continue;
            }
            if !first && *v > 0.0 {
                f.write_str("+")?;
            }
            first = false;
            if unit.is_empty() || v.abs() != 1.0 {
                write!(f, "{v}")?;
            } else if *v < 0.0 {
                f.write_str("-")?;
            }
            f.write_str(unit)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Parses `1+2i`, `-j`, `0.5+0.5i+0.5j+0.5k`, `1/2-1/2i+1/2j+1/2k` and
/// similar sums of signed terms.
impl<T: LatticeInt> FromStr for HurwitzInteger<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = parse_terms(s, &['i', 'j', 'k'])?;
        let mut doubled = [0i64; 4];
        for (slot, c) in doubled.iter_mut().zip(coeffs) {
            *slot = doubled_coefficient(c, s)?;
        }
        Self::try_from(doubled)
    }
}

/// Splits an algebraic sum into real-valued coefficients per unit
/// (index 0 is the real part).
pub(crate) fn parse_terms(s: &str, units: &[char]) -> Result<Vec<f64>> {
    let bad = || Error::InvalidInput(format!("cannot parse lattice point {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut coeffs = vec![0.0; units.len() + 1];
    let mut term = String::new();
    let mut terms = Vec::new();
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && !term.is_empty() && !term.ends_with(['e', 'E']) {
            terms.push(std::mem::take(&mut term));
        }
        term.push(ch);
    }
    terms.push(term);
    for t in terms {
        let (body, slot) = match t.chars().last() {
            Some(u) if units.contains(&u) => {
                let idx = units.iter().position(|&x| x == u).unwrap() + 1;
                (&t[..t.len() - 1], idx)
            }
            _ => (t.as_str(), 0),
        };
        let value = match body {
            "" | "+" => 1.0,
            "-" => -1.0,
            b => parse_number(b).ok_or_else(bad)?,
        };
        coeffs[slot] += value;
    }
    Ok(coeffs)
}

fn parse_number(b: &str) -> Option<f64> {
    if let Some((n, d)) = b.split_once('/') {
        let n: f64 = n.parse().ok()?;
        let d: f64 = d.parse().ok()?;
        (d != 0.0).then(|| n / d)
    } else {
        b.parse().ok()
    }
}

pub(crate) fn doubled_coefficient(c: f64, src: &str) -> Result<i64> {
    let d = c * 2.0;
    if (d - d.round()).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "coefficient {c} in {src:?} is not a multiple of 1/2"
        )));
    }
    Ok(d.round() as i64)
}
