//! Exact lattice arithmetic, quantizers, the coset partition and shaping
//! estimators.

pub mod constellation;
pub mod gaussian;
pub mod hurwitz;
pub mod partition;
pub mod quantize;
pub mod shaping;

pub use constellation::{normalize_constellation, Constellation};
pub use gaussian::GaussianInteger;
pub use hurwitz::HurwitzInteger;
pub use partition::{IdealRing, PartitionDocument, PartitionTable, RingKind};
pub use quantize::{nearest_gaussian, nearest_hurwitz_doubled, nearest_integer, quantize_hurwitz};
pub use shaping::{nsm_estimate, shaping_gain, NsmEstimate, ShapingLattice};
