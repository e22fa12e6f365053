//! Ensembles, graph sampling, encoding and belief-propagation decoding.

pub mod check;
pub mod decoder;
pub mod degree;
pub mod encode;
pub mod ensemble;
pub mod graph;
pub mod message;
pub mod presets;
pub mod variable;

pub use check::{cn_update_dft, cn_update_direct, CheckKernel, GroupDft};
pub use decoder::{bp_decode, bp_decode_traced, BpDecoder, DecodeOutcome, IterationRecord};
pub use degree::{parse_degree_map, DegreeDistribution};
pub use encode::{encode, encode_full, parity_violations, Codeword};
pub use ensemble::{make_ensemble, CodeEnsemble};
pub use graph::{sample_graph, sample_graph_with, Interleaver, TannerGraphInstance};
pub use message::{LlrVec, ProbVec};
pub use presets::Preset;
pub use variable::vn_update;
