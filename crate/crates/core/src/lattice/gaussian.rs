//! Gaussian integers ℤ[i], the two-dimensional baseline ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::NumCast;
use serde::{Deserialize, Serialize};

use super::hurwitz::{doubled_coefficient, parse_terms};
use super::quantize::nearest_gaussian_scaled;
use crate::error::{Error, Result};
use crate::scalar::LatticeInt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussianInteger<T: LatticeInt = i64> {
    pub re: T,
    pub im: T,
}

impl<T: LatticeInt> GaussianInteger<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn norm(&self) -> T {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [
            self.re.to_f64().expect("fits f64"),
            self.im.to_f64().expect("fits f64"),
        ]
    }

    fn to_i64(self) -> Option<GaussianInteger<i64>> {
        Some(GaussianInteger::new(self.re.to_i64()?, self.im.to_i64()?))
    }

    /// `λ − ξ·round(λ/ξ)` with round-half-down on each coordinate.
    pub fn mod_xi(&self, xi: &Self) -> Result<Self> {
        let n = xi.norm();
        if n == T::zero() {
            return Err(Error::ZeroModulus);
        }
        let overflow = || Error::InvalidInput("coordinate overflow".into());
        let x = self.to_i64().ok_or_else(overflow)?;
        let xi64 = xi.to_i64().ok_or_else(overflow)?;
        let numer = xi64.conj() * x;
        let [re, im] = nearest_gaussian_scaled([numer.re, numer.im], xi64.norm());
        let reduced = x - xi64 * GaussianInteger::new(re, im);
        Ok(Self::new(
            <T as NumCast>::from(reduced.re).ok_or_else(overflow)?,
            <T as NumCast>::from(reduced.im).ok_or_else(overflow)?,
        ))
    }
}

impl<T: LatticeInt> Add for GaussianInteger<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<T: LatticeInt> Sub for GaussianInteger<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<T: LatticeInt> Neg for GaussianInteger<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<T: LatticeInt> Mul for GaussianInteger<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl<T: LatticeInt> fmt::Debug for GaussianInteger<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({:?}, {:?})", self.re, self.im)
    }
}

impl<T: LatticeInt> FromStr for GaussianInteger<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let c = parse_terms(s, &['i'])?;
        let bad = || Error::InvalidInput(format!("{s:?} is not a Gaussian integer"));
        let re = doubled_coefficient(c[0], s)?;
        let im = doubled_coefficient(c[1], s)?;
        if re % 2 != 0 || im % 2 != 0 {
            return Err(bad());
        }
        Ok(Self::new(
            <T as NumCast>::from(re / 2).ok_or_else(bad)?,
            <T as NumCast>::from(im / 2).ok_or_else(bad)?,
        ))
    }
}
