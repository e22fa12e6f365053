//! EXIT analysis: Gaussian LLR model, `J` function, transfer curves, degree
//! optimization, threshold search and constellation capacity.

pub mod capacity;
pub mod curves;
pub mod jtable;
pub mod llr;
pub mod optimize;
pub mod simplex;
pub mod threshold;

pub use curves::{cnd_curve, uniform_grid, vnd_curve, CndConfig, CndEstimator, CndMode, CurveKind, ExitCurve};
pub use jtable::{j_func, j_inv, JTable, JTableSpec};
pub use llr::{mutual_info, sample_llr, LlrMatrix, LlrModel, PsiZero};
pub use optimize::{optimize_degrees, OptimizedDistribution, OptimizerConfig};
pub use threshold::{threshold_search, tunnel, ExitModel, ThresholdConfig, ThresholdResult, TunnelReport};
pub use capacity::{constellation_mi, shannon_limit, unrestricted_capacity, MiEstimate};
