//! Scalar traits the numeric kernels are generic over.
//!
//! Lattice arithmetic is exact and runs on signed primitive integers
//! ([`LatticeInt`]). Nearest-point quantization accepts any [`Coord`]
//! (`f32`, `f64` or an exact [`Rational64`]). Belief-propagation messages and
//! channel values use a [`Real`] float.

use std::fmt::Debug;
use std::hash::Hash;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_rational::Rational64;
use num_traits::{Float, FloatConst, FromPrimitive, Num, PrimInt, Signed, ToPrimitive};

/// Floating-point type for messages and channel samples.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Default
    + Debug
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Floor applied to probabilities before renormalizing a product.
    const TINY: Self;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal fits the float type")
    }
}

impl Real for f32 {
    const TINY: f32 = 1e-37;
}

impl Real for f64 {
    const TINY: f64 = 1e-300;
}

/// Integer type holding doubled lattice coordinates.
pub trait LatticeInt: PrimInt + Signed + Hash + Debug + Send + Sync + 'static {}

impl LatticeInt for i32 {}
impl LatticeInt for i64 {}
impl LatticeInt for i128 {}

/// Coordinate type accepted by the nearest-point quantizers.
pub trait Coord: Clone + PartialOrd + Num + Neg<Output = Self> + Debug {
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn ceil(&self) -> Self;
    /// Integer value of an integral coordinate.
    fn integral(&self) -> Option<i64>;
    fn is_finite(&self) -> bool;
}

macro_rules! impl_float_coord {
    ($f:ty) => {
        impl Coord for $f {
            fn from_ratio(numer: i64, denom: i64) -> Self {
                numer as $f / denom as $f
            }
            fn ceil(&self) -> Self {
                Float::ceil(*self)
            }
            fn integral(&self) -> Option<i64> {
                ToPrimitive::to_i64(self)
            }
            fn is_finite(&self) -> bool {
                Float::is_finite(*self)
            }
        }
    };
}

impl_float_coord!(f32);
impl_float_coord!(f64);

impl Coord for Rational64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational64::new(numer, denom)
    }
    fn ceil(&self) -> Self {
        Rational64::ceil(self)
    }
    fn integral(&self) -> Option<i64> {
        self.is_integer().then(|| self.to_integer())
    }
    fn is_finite(&self) -> bool {
        true
    }
}
