//! Monte-Carlo SER/FER sweeps, capacity sweeps, frame replay and result files.

pub mod capacity;
pub mod experiment;
pub mod frame;
pub mod output;
pub mod sweep;

pub use capacity::{run_capacity_sweep, CapacityRow, CapacityTable};
pub use experiment::{wilson, EnsembleSpec, ExperimentSpec, GraphMode, ResultRow, StopRule};
pub use frame::{replay_frame, simulate_frame, violation_profile, FrameRecord, ReplayTranscript};
pub use output::{
    capacity_to_csv, git_revision, plot_data, rows_to_csv, write_capacity, write_sweep, RunMetadata, SweepReport,
};
pub use sweep::{run_ser_sweep, run_ser_sweep_with, SweepOutput};
