//! IRA lattice codes over the Hurwitz partition ℍ/(1+2i)ℍ and the Gaussian
//! baseline ℤ[i]/(1+2i)ℤ[i].

pub mod channel;
pub mod codec;
pub mod error;
pub mod exit;
pub mod lattice;
pub mod rng;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use lattice::{
    normalize_constellation, nsm_estimate, quantize_hurwitz, shaping_gain, Constellation,
    PartitionTable, RingKind,
};
pub use scalar::{Coord, LatticeInt, Real};

/// Hurwitz integer with 64-bit doubled coordinates.
pub type Hurwitz = lattice::HurwitzInteger<i64>;
/// Gaussian integer with 64-bit coordinates.
pub type Gaussian = lattice::GaussianInteger<i64>;
